function shift_match(s, t, n) {
    s = s.replace(/-/g, '');
    var k = ((n % s.length) + s.length) % s.length;
    var need = new Map(); for (var _c of s) need.set(_c, 1 + (need.has(_c) ? need.get(_c) : 0));
    var shifted = s.slice(k) + s.slice(0, k);
    for (var c of t) {
        if ((need.get(c) || 0) === 0) {
            return false;
        }
        need.set(c, need.get(c) - 1);
    }
    return shifted.startsWith(t);
}

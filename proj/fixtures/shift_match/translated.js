function shift_match(s, t, n) {
    s = s.replace('-', '');
    var k = n % s.length;
    var need = new Map();
    var shifted = s.slice(k) + s.slice(0, k);
    for (var c of t) {
        if ((need.get(c) || 0) === 0) {
            return false;
        }
        need.set(c, need.get(c) - 1);
    }
    return shifted.startsWith(t);
}

function most_common_char(s) {
    var counts = new Map(); for (var _c of s) counts.set(_c, 1 + (counts.has(_c) ? counts.get(_c) : 0));
    var best = '';
    for (var ch of Array.from(counts.keys()).sort()) {
        if (best === '' || counts.get(ch) > counts.get(best)) {
            best = ch;
        }
    }
    return best;
}

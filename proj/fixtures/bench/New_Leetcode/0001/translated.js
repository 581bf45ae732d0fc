function most_common_char(s) {
    var counts = new Map();
    var best = '';
    for (var ch of Array.from(counts.keys()).sort()) {
        if (best === '' || counts.get(ch) > counts.get(best)) {
            best = ch;
        }
    }
    return best;
}

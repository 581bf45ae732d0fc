function normalize_phone(raw) {
    var digits = raw.replace(/ /g, '');
    digits = digits.replace(/-/g, '');
    if (digits.startsWith('+')) {
        digits = digits.slice(1);
    }
    return digits;
}

function sum_of_fields(line) {
    var total = 0;
    for (var field of line.split(',')) {
        if (!/^\s*[-+]?\d+\s*$/.test(field)) throw new Error('invalid literal');
        total += parseInt(field, 10);
    }
    return total;
}

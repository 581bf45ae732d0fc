function sum_of_fields(line) {
    var total = 0;
    for (var field of line.split(',')) {
        total += parseInt(field);
    }
    return total;
}

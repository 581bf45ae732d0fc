function average_rating(scores) {
    var total = 0;
    for (var s of scores) {
        total += s;
    }
    var mean = total / scores.length;
    return Math.round(mean);
}

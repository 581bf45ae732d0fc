function average_rating(scores) {
    var total = 0;
    for (var s of scores) {
        total += s;
    }
    var mean = total / scores.length;
    var r = Math.round(mean);
    return (Math.abs(mean % 1) === 0.5 && r % 2 !== 0) ? r - 1 : r;
}

function kth_smallest_gap(nums, k) {
    var ordered = nums.slice().sort();
    var gaps = [];
    for (var i = 1; i < ordered.length; i++) {
        gaps.push(ordered[i] - ordered[i - 1]);
    }
    gaps.sort();
    return gaps[k - 1];
}

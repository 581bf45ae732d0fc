function kth_smallest_gap(nums, k) {
    var ordered = nums.slice().sort((a, b) => a - b);
    var gaps = [];
    for (var i = 1; i < ordered.length; i++) {
        gaps.push(ordered[i] - ordered[i - 1]);
    }
    gaps.sort((a, b) => a - b);
    return gaps[k - 1];
}

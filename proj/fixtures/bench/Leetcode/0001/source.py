def kth_smallest_gap(nums, k):
    ordered = sorted(nums)
    gaps = []
    for i in range(1, len(ordered)):
        gaps.append(ordered[i] - ordered[i - 1])
    gaps.sort()
    return gaps[k - 1]

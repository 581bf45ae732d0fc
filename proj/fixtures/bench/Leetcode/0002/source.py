def rotate_left(arr, k):
    n = len(arr)
    out = [0] * n
    for i in range(n):
        out[(i - k) % n] = arr[i]
    return out


def suffix_total(arr):
    total = 0
    for j in range(len(arr) - 1, 0, -1):
        total += arr[j]
    return total

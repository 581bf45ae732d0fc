function rotate_left(arr, k) {
    var n = arr.length;
    var out = new Array(n).fill(0);
    for (var i = 0; i < n; i++) {
        out[(((i - k) % n) + n) % n] = arr[i];
    }
    return out;
}

function suffix_total(arr) {
    var total = 0;
    for (var j = arr.length - 1; j > 0; j--) {
        total += arr[j];
    }
    return total;
}

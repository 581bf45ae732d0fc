from collections import Counter


def most_common_char(s):
    counts = Counter(s)
    best = ''
    for ch in sorted(counts):
        if best == '' or counts[ch] > counts[best]:
            best = ch
    return best

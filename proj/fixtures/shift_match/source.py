from collections import Counter

def shift_match(s, t, n):
    s = s.replace('-', '')
    k = n % len(s)
    need = Counter(s)
    shifted = s[k:] + s[:k]
    for c in t:
        if need[c] == 0:
            return False
        need[c] -= 1
    return shifted.startswith(t)

def classify(values, limit=10):
    total = 0
    result = []
    i = 0
    while i < len(values):
        v = values[i]
        if v < 0:
            result.append('neg')
        elif v == 0:
            result.append('zero')
        elif v > limit:
            result.append('big')
        else:
            result.append('small')
        total += abs(v)
        i += 1
    else:
        print('done', total)
    return result, total


print(classify([3, -1, 0, 42]))

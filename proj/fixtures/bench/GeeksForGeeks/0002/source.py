def average_rating(scores):
    total = 0
    for s in scores:
        total += s
    mean = total / len(scores)
    return round(mean)

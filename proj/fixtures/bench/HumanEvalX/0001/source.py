def sum_of_fields(line):
    total = 0
    for field in line.split(','):
        total += int(field)
    return total

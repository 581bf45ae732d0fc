from os import path as p, sep
from . import sibling
global_value = 3


def outer():
    counter = 0

    def inner(delta=1, *args, scale, **kwargs):
        nonlocal counter
        counter += delta * scale
        return counter

    assert inner(1, scale=2) == 2, "bad"
    del counter
    return inner


matrix = [[1, 2], [3, 4]]
matrix[0][1] = matrix[1][0] = 9
first, (second, third) = 1, (2, 3)
if (n := len(matrix)) > 1: print(n)
for i in range(3): pass
value = not matrix or -1 ** 2 // 3 << 1 | 4 & 5 ^ 6
sliced = matrix[::2], matrix[1:], matrix[:-1]
lam = lambda x, y=len('ab'): x + y

"""Dormand-Prince 5(4) coefficients, stored once as exact fractions.

Both integrator kernels read their floating-point coefficients from here.
``DENSE`` holds the weights of the standard continuous extension
(Hairer, Norsett & Wanner, dopri5).
"""
from fractions import Fraction as F

C = (F(0), F(1, 5), F(3, 10), F(4, 5), F(8, 9), F(1), F(1))

A = (
    (),
    (F(1, 5),),
    (F(3, 40), F(9, 40)),
    (F(44, 45), F(-56, 15), F(32, 9)),
    (F(19372, 6561), F(-25360, 2187), F(64448, 6561), F(-212, 729)),
    (F(9017, 3168), F(-355, 33), F(46732, 5247), F(49, 176), F(-5103, 18656)),
    (F(35, 384), F(0), F(500, 1113), F(125, 192), F(-2187, 6784), F(11, 84)),
)

# fifth-order weights (equal to the last row of A: first same as last)
B5 = (F(35, 384), F(0), F(500, 1113), F(125, 192), F(-2187, 6784), F(11, 84), F(0))
# embedded fourth-order weights
B4 = (F(5179, 57600), F(0), F(7571, 16695), F(393, 640), F(-92097, 339200), F(187, 2100), F(1, 40))

DENSE = (
    F(-12715105075, 11282082432),
    F(0),
    F(87487479700, 32700410799),
    F(-10690763975, 1880347072),
    F(701980252875, 199316789632),
    F(-1453857185, 822651844),
    F(69997945, 29380423),
)


def as_float_arrays():
    """``(a, b5, e, c, d)`` as numpy arrays; ``e = b5 - b4`` is the error weight."""
    import numpy as np

    a = np.zeros((7, 7))
    for i, row in enumerate(A):
        for j, x in enumerate(row):
            a[i, j] = float(x)
    b5 = np.array([float(x) for x in B5])
    e = np.array([float(x - y) for x, y in zip(B5, B4)])
    c = np.array([float(x) for x in C])
    d = np.array([float(x) for x in DENSE])
    return a, b5, e, c, d


def canonical_text() -> str:
    parts = ["C:" + ",".join(map(str, C))]
    parts += [f"A{i}:" + ",".join(map(str, row)) for i, row in enumerate(A)]
    parts.append("B5:" + ",".join(map(str, B5)))
    parts.append("B4:" + ",".join(map(str, B4)))
    parts.append("D:" + ",".join(map(str, DENSE)))
    return "\n".join(parts)


def checksum() -> str:
    import hashlib

    return hashlib.sha256(canonical_text().encode()).hexdigest()

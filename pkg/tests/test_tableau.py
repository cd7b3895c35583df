from fractions import Fraction as F

import numpy as np
import pytest

from crimedyn import _tableau as T

CHECKSUM = "aa960856792b78fa323cd0a492b9408e1f536ba3cfe4ae64def3d5d2fe7cc3b9"


def _a():
    return [list(row) + [F(0)] * (7 - len(row)) for row in T.A]


def _av(vec):
    a = _a()
    return [sum(a[i][j] * vec[j] for j in range(7)) for i in range(7)]


def _dot(b, v):
    return sum(x * y for x, y in zip(b, v))


def _mul(u, v):
    return [x * y for x, y in zip(u, v)]


def order_conditions(b):
    """(value, target) for every rooted tree up to order 5."""
    c = list(T.C)
    one = [F(1)] * 7
    c2, c3 = _mul(c, c), _mul(c, _mul(c, c))
    ac, ac2, ac3 = _av(c), _av(c2), _av(c3)
    aac = _av(ac)
    return {
        1: [(_dot(b, one), F(1))],
        2: [(_dot(b, c), F(1, 2))],
        3: [(_dot(b, c2), F(1, 3)), (_dot(b, ac), F(1, 6))],
        4: [(_dot(b, c3), F(1, 4)), (_dot(b, _mul(c, ac)), F(1, 8)), (_dot(b, ac2), F(1, 12)),
            (_dot(b, aac), F(1, 24))],
        5: [(_dot(b, _mul(c2, c2)), F(1, 5)), (_dot(b, _mul(c2, ac)), F(1, 10)),
            (_dot(b, _mul(c, ac2)), F(1, 15)), (_dot(b, _mul(c, aac)), F(1, 30)),
            (_dot(b, _mul(ac, ac)), F(1, 20)), (_dot(b, ac3), F(1, 20)),
            (_dot(b, _av(_mul(c, ac))), F(1, 40)), (_dot(b, _av(ac2)), F(1, 60)),
            (_dot(b, _av(aac)), F(1, 120))],
    }


def dense_weights(theta):
    """Stage weights of the continuous extension at ``theta`` (exact)."""
    b5 = list(T.B5)
    e0 = [F(1)] + [F(0)] * 6
    e6 = [F(0)] * 6 + [F(1)]
    r2 = b5
    r3 = [x - y for x, y in zip(e0, b5)]
    r4 = [2 * x - y - z for x, y, z in zip(b5, e0, e6)]
    r5 = list(T.DENSE)
    th, th1 = theta, 1 - theta
    return [th * (r2[j] + th1 * (r3[j] + th * (r4[j] + th1 * r5[j]))) for j in range(7)]


class TestTableau:
    def test_checksum(self):
        assert T.checksum() == CHECKSUM

    def test_shape(self):
        assert len(T.C) == 7 and len(T.B5) == 7 and len(T.B4) == 7 and len(T.DENSE) == 7
        assert [len(row) for row in T.A] == list(range(7))

    def test_row_sums(self):
        for ci, row in zip(T.C, T.A):
            assert sum(row, F(0)) == ci

    def test_first_same_as_last(self):
        assert tuple(T.A[6]) == T.B5[:6] and T.B5[6] == 0

    @pytest.mark.parametrize("order", [1, 2, 3, 4, 5])
    def test_fifth_order_weights(self, order):
        for value, target in order_conditions(T.B5)[order]:
            assert value == target

    @pytest.mark.parametrize("order", [1, 2, 3, 4])
    def test_embedded_fourth_order_weights(self, order):
        for value, target in order_conditions(T.B4)[order]:
            assert value == target

    def test_embedded_is_not_fifth_order(self):
        assert any(v != t for v, t in order_conditions(T.B4)[5])

    def test_float_arrays(self):
        a, b5, e, c, d = T.as_float_arrays()
        assert a.shape == (7, 7) and np.all(np.triu(a) == 0)
        assert b5.sum() == pytest.approx(1.0, abs=1e-15)
        assert e.sum() == pytest.approx(0.0, abs=1e-15)
        assert c[-1] == 1.0
        assert d[1] == 0.0


class TestDenseOutput:
    def test_endpoints(self):
        assert dense_weights(F(0)) == [F(0)] * 7
        assert dense_weights(F(1)) == list(T.B5)

    @pytest.mark.parametrize("theta", [F(1, 10), F(1, 3), F(1, 2), F(7, 9)])
    def test_quadrature_conditions(self, theta):
        # b_j(theta) integrates polynomials up to degree 3 exactly over [0, theta]
        b = dense_weights(theta)
        for k in range(4):
            assert _dot(b, [ci**k for ci in T.C]) == theta ** (k + 1) / (k + 1)

    @pytest.mark.parametrize("theta", [F(1, 3), F(1, 2)])
    def test_fourth_order_trees(self, theta):
        b = dense_weights(theta)
        c = list(T.C)
        ac = _av(c)
        assert _dot(b, ac) == theta**3 / 6
        assert _dot(b, _mul(c, ac)) == theta**4 / 8
        assert _dot(b, _av(_mul(c, c))) == theta**4 / 12
        assert _dot(b, _av(ac)) == theta**4 / 24

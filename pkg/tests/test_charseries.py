import random
from fractions import Fraction
from itertools import permutations

import pytest

from padicforms.charseries import (
    ALL_SATURATED,
    char_series,
    charpoly_reversed,
    newton_polygon,
    newton_polygon_exact,
    newton_polygon_from_points,
)
from padicforms.padic import PadicMatrix, PadicScalar

from test_linalg import random_matrix, random_unimodular


def det_bruteforce(rows, modulus=None):
    """Permutation-sum determinant of a matrix with polynomial entries.

    Entries are coefficient lists; used as an independent oracle for
    det(I - T.U).
    """
    n = len(rows)
    total = {}
    for perm in permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        prod = {0: sign}
        for i in range(n):
            nxt = {}
            for deg, c in prod.items():
                for d, e in enumerate(rows[i][perm[i]]):
                    nxt[deg + d] = nxt.get(deg + d, 0) + c * e
            prod = nxt
        for deg, c in prod.items():
            total[deg] = total.get(deg, 0) + c
    out = [total.get(d, 0) for d in range(max(total) + 1)]
    if modulus:
        out = [c % modulus for c in out]
    return out


def det_i_minus_tu_bruteforce(matrix):
    rows = [
        [
            [1, -matrix.rows[i][j]] if i == j else [0, -matrix.rows[i][j]]
            for j in range(matrix.size)
        ]
        for i in range(matrix.size)
    ]
    out = det_bruteforce(rows, matrix.modulus)
    out += [0] * (matrix.size + 1 - len(out))
    return out[: matrix.size + 1]


def test_charpoly_trivial_cases():
    u = PadicMatrix.zero(2, 5, 5)
    assert charpoly_reversed(u.rows, u.modulus) == [1, 0, 0]
    u = PadicMatrix.identity(2, 5, 5)
    assert charpoly_reversed(u.rows, u.modulus) == [1, -2 % 5**5, 1]
    u = PadicMatrix.from_rows([[1, 1], [0, 5]], 5, 5)
    assert charpoly_reversed(u.rows, u.modulus) == [1, -6 % 5**5, 5]


def test_charpoly_against_bruteforce():
    rng = random.Random(3)
    for _ in range(30):
        n = rng.choice([2, 3, 4])
        u = random_matrix(rng, n, 5, 4)
        assert charpoly_reversed(u.rows, u.modulus) == det_i_minus_tu_bruteforce(u)


def test_charpoly_over_z():
    # integer matrix, no modulus: det(xI - A) = x^2 - 5x - 2
    assert charpoly_reversed([[2, 3], [2, 3]]) == [1, -5, 0]
    assert charpoly_reversed([[1, 2], [3, 4]]) == [1, -5, -2]


def test_char_series_trace_normalization():
    rng = random.Random(9)
    for _ in range(10):
        u = random_matrix(rng, 3, 7, 3)
        series = char_series(u)
        assert int(series.coeffs[0]) == 1
        assert series.coeffs[1] == -u.trace()


def test_char_series_inverse_reversal_identity():
    # det(I - TU) read backwards equals det(-TU) * det(I - T U^{-1}),
    # whose leading factor (-1)^n det(U) is the last series coefficient.
    rng = random.Random(13)
    from padicforms.linalg import invert_unimodular

    for n in (2, 3):
        for _ in range(10):
            u = random_unimodular(rng, n, 5, 4)
            series = det_i_minus_tu_bruteforce(u)
            uinv = invert_unimodular(u)
            series_inv = det_i_minus_tu_bruteforce(uinv)
            assert charpoly_reversed(u.rows, u.modulus) == series
            factor = series[-1]  # (-1)^n det(U)
            scaled = [(factor * c) % u.modulus for c in series_inv]
            assert scaled[::-1] == series


def test_char_series_conjugation_invariance():
    rng = random.Random(21)
    from padicforms.linalg import invert_unimodular

    u = random_matrix(rng, 3, 5, 4)
    base = char_series(u)
    for _ in range(5):
        g = random_unimodular(rng, 3, 5, 4)
        conj = invert_unimodular(g) @ u @ g
        assert char_series(conj).coeffs == base.coeffs


def test_newton_polygon_simple():
    coeffs = [PadicScalar(c, 5, 5) for c in (1, -6, 5)]
    from padicforms.charseries import CharSeries

    poly = newton_polygon(CharSeries(tuple(coeffs), 2))
    assert poly.slope_multiset() == [Fraction(0), Fraction(1)]
    assert poly.next_slope_floor is None

    poly = newton_polygon(CharSeries(tuple(PadicScalar(c, 5, 5) for c in (1, -1)), 1))
    assert poly.slope_multiset() == [Fraction(0)]


def test_newton_polygon_slopes_zero_and_three():
    # 1 - 126T + 125T^2 has roots 1 and 1/125: slopes {0, 3}
    from padicforms.charseries import CharSeries

    coeffs = tuple(PadicScalar(c, 5, 5) for c in (1, -126, 125))
    poly = newton_polygon(CharSeries(coeffs, 2))
    assert poly.slope_multiset() == [Fraction(0), Fraction(3)]


def test_newton_polygon_saturation_truncates():
    from padicforms.charseries import CharSeries

    # c_2 = 0 mod 5^3 is unknown >= 3; slope after the first segment is
    # bounded below but not certified
    coeffs = tuple(PadicScalar(c, 5, 3) for c in (1, -1, 0))
    poly = newton_polygon(CharSeries(coeffs, 2))
    assert poly.slope_multiset() == [Fraction(0)]
    assert poly.certified_degree == 1
    assert poly.next_slope_floor == Fraction(3)


def test_newton_polygon_all_saturated():
    from padicforms.charseries import CharSeries

    coeffs = tuple(PadicScalar(c, 5, 3) for c in (1, 0, 0))
    poly = newton_polygon(CharSeries(coeffs, 2))
    assert poly.warning == ALL_SATURATED
    assert poly.slope_multiset() == []


def test_newton_polygon_hidden_cut_not_certified():
    # exact points (0,0), (2,0) with unknown (1, >=4): the hull vertex at
    # index 2 is certified only because the floor at index 1 cannot cut
    # below the chord; with a lower ceiling it could, so certification stops.
    poly = newton_polygon_from_points([(0, 0), (1, None), (2, 6)], 8)
    assert poly.vertices[-1] == (2, 6)
    poly = newton_polygon_from_points([(0, 0), (1, None), (2, 6)], 2)
    assert poly.certified_degree == 0
    assert poly.next_slope_floor == Fraction(2)


def test_newton_polygon_exact_integer_series():
    # x^2 - 4830x + 5^11 story: slopes {1, 10}
    poly = newton_polygon_exact([1, -4830, 5**11], 5)
    assert poly.slope_multiset() == [Fraction(1), Fraction(10)]
    # zero coefficients over Z are genuinely infinite, not saturation
    poly = newton_polygon_exact([1, -1, 0], 5)
    assert poly.slope_multiset() == [Fraction(0)]
    assert poly.next_slope_floor is None


def test_newton_polygon_conjugation_invariance():
    rng = random.Random(31)
    from padicforms.linalg import invert_unimodular

    u = random_matrix(rng, 3, 5, 4)
    base = newton_polygon(char_series(u))
    for _ in range(5):
        g = random_unimodular(rng, 3, 5, 4)
        conj = invert_unimodular(g) @ u @ g
        poly = newton_polygon(char_series(conj))
        assert poly.slopes == base.slopes
        assert poly.multiplicities == base.multiplicities


def test_char_series_validation():
    from padicforms.charseries import CharSeries

    with pytest.raises(ValueError):
        CharSeries(tuple([PadicScalar(2, 5, 3)]), 0)
    with pytest.raises(ValueError):
        CharSeries(tuple([PadicScalar(1, 5, 3)]), 1)

import pytest

from padicforms.errors import PrecisionError, VerificationError
from padicforms.weights import (
    IwasawaTruncation,
    WeightPoint,
    congruence_table,
    interpolate_iwasawa,
    iwasawa_specialize,
    w_coordinate,
)


def test_w_coordinate():
    assert w_coordinate(0, 5, 4) == 0
    assert w_coordinate(1, 5, 4) == 5
    assert w_coordinate(4, 5, 4) == (6**4 - 1) % 5**4  # 1295 mod 625 = 45
    assert w_coordinate(-1, 5, 3) == (pow(6, -1, 125) - 1) % 125


def test_weight_point_validation():
    pt = WeightPoint.from_integer(12, 5, 3)
    assert pt.component == 0
    assert pt.w == w_coordinate(12, 5, 3)
    assert pt.is_classical()
    with pytest.raises(ValueError):
        WeightPoint(5, 3, 1, w_coordinate(12, 5, 3), k=12)
    with pytest.raises(ValueError):
        WeightPoint(5, 3, 0, 17, k=12)
    nonclassical = WeightPoint(5, 3, 0, 10)
    assert not nonclassical.is_classical()


def test_specialize_constant_and_linear():
    const = IwasawaTruncation(5, 0, (7,), 4)
    for k in (0, 4, 8, 20):
        assert int(iwasawa_specialize(const, k)) == 7
    linear = IwasawaTruncation(5, 0, (0, 1), 4)  # the polynomial w
    assert int(linear.specialize(0)) == 0
    assert int(linear.specialize(4)) == 1295 % 625
    with pytest.raises(ValueError):
        linear.specialize(3)


def test_interpolation_round_trip():
    # a(k) = 1 + 2^(k-1) on weights = 0 mod 4, a genuine Iwasawa function
    p, m = 5, 8
    weights = [4, 8, 12, 16]
    samples = [(k, 1 + 2 ** (k - 1)) for k in weights]
    fit = interpolate_iwasawa(samples, p, m)
    for k, value in samples:
        assert int(fit.specialize(k)) == value % 5**fit.m
    # held-out specialization agrees to the p-adic distance bound
    target = 1 + 2**23
    predicted = int(fit.specialize(24))
    bound = sum(1 + _v5(24 - k) for k in weights)
    bound = min(bound, fit.m)
    assert (predicted - target) % 5**bound == 0


def _v5(n):
    v = 0
    while n % 5 == 0:
        n //= 5
        v += 1
    return v


def test_interpolation_of_polynomial_is_exact():
    # data that is exactly polynomial in w is recovered with full precision
    p, m = 5, 6
    weights = [4, 8, 12]
    values = [(3 + 5 * w_coordinate(k, p, m)) % 5**m for k in weights]
    fit = interpolate_iwasawa(list(zip(weights, values)), p, m)
    assert fit.m >= m - 2
    assert [int(fit.specialize(k)) % 5**fit.m for k in weights] == [
        v % 5**fit.m for v in values
    ]
    held_out = int(fit.specialize(20))
    assert held_out == (3 + 5 * w_coordinate(20, p, m)) % 5**fit.m


def test_interpolation_congruence_failure_detected():
    # values that violate a(k) = a(k') mod p^v(w_k - w_k') cannot be fitted
    with pytest.raises(VerificationError):
        interpolate_iwasawa([(4, 0), (8, 1), (12, 2)], 5, 6)


def test_interpolation_validation():
    with pytest.raises(ValueError):
        interpolate_iwasawa([(4, 1), (7, 2)], 5, 4)
    with pytest.raises(ValueError):
        interpolate_iwasawa([(4, 1), (4, 2)], 5, 4)
    with pytest.raises(PrecisionError):
        # weights congruent mod 4*5^3 are too close for m = 2
        interpolate_iwasawa([(4, 1), (4 + 4 * 125, 1)], 5, 2)


def test_congruence_table():
    samples = [(k, 1 + 2 ** (k - 1)) for k in (4, 24, 104)]
    table = congruence_table(samples, 5, 6)
    by_pair = {entry["weights"]: entry for entry in table}
    # k - k' = 20 = 4*5 gives v(w-w') = 2; 2^20 - 1 is divisible by 25 not 125
    assert by_pair[(4, 24)]["required"] == 2
    assert by_pair[(4, 24)]["observed"] == 2
    # k - k' = 100 = 4*25 gives v(w-w') = 3
    assert by_pair[(4, 104)]["required"] == 3
    assert all(entry["holds"] for entry in table)

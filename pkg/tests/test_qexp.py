import pytest

from padicforms.errors import PrecisionError
from padicforms.qexp import ModRing, QSeries, ZZ


def test_construction_and_reduction():
    f = QSeries.from_coeffs([1, 2, 3])
    assert f.qprec == 3
    g = QSeries.from_coeffs([126, -1, 130], ModRing(5, 2))
    assert g.coeffs == (1, 24, 5)


def test_arithmetic_min_precision():
    f = QSeries.from_coeffs([1, 2, 3, 4])
    g = QSeries.from_coeffs([1, 1, 1])
    assert (f + g).coeffs == (2, 3, 4)
    assert (f - g).coeffs == (0, 1, 2)
    assert (f * g).coeffs == (1, 3, 6)


def test_ring_mismatch_rejected():
    f = QSeries.from_coeffs([1, 2], ModRing(5, 2))
    g = QSeries.from_coeffs([1, 2], ModRing(5, 3))
    with pytest.raises(ValueError):
        f + g
    with pytest.raises(ValueError):
        f * QSeries.from_coeffs([1, 2])


def test_pow_and_inverse():
    f = QSeries.from_coeffs([1, 1, 0, 0, 0])
    assert (f**2).coeffs == (1, 2, 1, 0, 0)
    assert (f * f.inverse()).coeffs == (1, 0, 0, 0, 0)
    g = QSeries.from_coeffs([1, 240, 2160], ModRing(5, 3))
    assert (g * g.inverse()).coeffs == (1, 0, 0)
    assert (g**-2) == (g.inverse()) ** 2
    with pytest.raises(ZeroDivisionError):
        QSeries.from_coeffs([5, 1], ModRing(5, 3)).inverse()
    with pytest.raises(ZeroDivisionError):
        QSeries.from_coeffs([2, 1]).inverse()


def test_truncate_shift_leading():
    f = QSeries.from_coeffs([0, 0, 7, 1])
    assert f.leading_index() == 2
    assert f.truncate(2).coeffs == (0, 0)
    assert f.shift_q(1).coeffs == (0, 0, 0, 7, 1)
    with pytest.raises(PrecisionError):
        f.truncate(9)
    with pytest.raises(PrecisionError):
        f.coefficient(4)


def test_to_ring():
    f = QSeries.from_coeffs([1, -24, 252])
    g = f.to_ring(ModRing(5, 2))
    assert g.coeffs == (1, 1, 2)
    h = g.to_ring(ModRing(5, 1))
    assert h.coeffs == (1, 1, 2)
    with pytest.raises(ValueError):
        h.to_ring(ModRing(5, 2))
    with pytest.raises(ValueError):
        g.to_ring(ZZ)

"""Classical level-1 modular forms as q-expansions.

Eisenstein series, the discriminant form, echelon (Victor Miller)
bases, the level-1 dimension formula and the Hasse invariant lift.
The p-adic theory in this package is restricted to p in {5, 7, 11, 13}
so that E_{p-1} exists at level 1 and serves as the Hasse lift.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import List

from .errors import PrecisionError
from .qexp import ModRing, QSeries, Ring, ZZ

SUPPORTED_PRIMES = (5, 7, 11, 13)


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """B_n with B_1 = -1/2, via the defining recurrence."""
    if n == 0:
        return Fraction(1)
    acc = Fraction(0)
    for k in range(n):
        acc += comb(n + 1, k) * bernoulli(k)
    return -acc / (n + 1)


def sigma_series(k: int, qprec: int) -> List[int]:
    """Coefficients of sum_{n>=1} sigma_k(n) q^n, by sieving."""
    out = [0] * qprec
    for d in range(1, qprec):
        dk = d**k
        for n in range(d, qprec, d):
            out[n] += dk
    return out


def eisenstein(k: int, qprec: int, ring: Ring = ZZ) -> QSeries:
    """Normalized Eisenstein series E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n.

    Over Z this requires 2k/B_k to be an integer (true for instance for
    k in {4, 6, 8, 10, 14}); for other weights pass a Z/p^m ring in
    which the denominator is a unit (e.g. E_12 for p = 13).
    """
    if k < 4 or k % 2 != 0:
        raise ValueError(f"E_k needs even k >= 4, got {k}")
    factor = Fraction(-2 * k) / bernoulli(k)
    sig = sigma_series(k - 1, qprec)
    if isinstance(ring, ModRing):
        if factor.denominator % ring.p == 0:
            raise ValueError(f"E_{k} is not {ring.p}-integral")
        c = factor.numerator * pow(factor.denominator, -1, ring.modulus)
    else:
        if factor.denominator != 1:
            raise ValueError(
                f"E_{k} is not integral over Z (factor {factor}); use a p-adic ring"
            )
        c = factor.numerator
    coeffs = [1] + [c * s for s in sig[1:]]
    return QSeries(ring, tuple(coeffs))


def eta_power_24(qprec: int) -> List[int]:
    """Coefficients of prod (1 - q^n)^24 via the pentagonal-number series."""
    euler = [0] * qprec
    euler[0] = 1
    j = 1
    while True:
        p1 = j * (3 * j - 1) // 2
        p2 = j * (3 * j + 1) // 2
        if p1 >= qprec and p2 >= qprec:
            break
        s = -1 if j % 2 else 1
        if p1 < qprec:
            euler[p1] = s
        if p2 < qprec:
            euler[p2] = s
        j += 1
    f = QSeries.from_coeffs(euler)
    return list((f**24).coeffs)


def delta(qprec: int, ring: Ring = ZZ) -> QSeries:
    """The discriminant form, from the product formula q prod(1-q^n)^24.

    The product route avoids the large cancellations of (E4^3 - E6^2)/1728
    in small moduli.
    """
    if qprec < 2:
        raise PrecisionError("delta needs q-precision >= 2")
    tail = eta_power_24(qprec - 1)
    return QSeries(ring, tuple([0] + tail))


def basis_dimension(k: int) -> int:
    """dim M_k(SL_2(Z)): 0 for odd or negative k, else the 12-periodic count."""
    if k < 0 or k % 2 != 0:
        return 0
    if k % 12 == 2:
        return k // 12
    return k // 12 + 1


@dataclass(frozen=True)
class SpaceBasis:
    """Echelon basis of the weight-k level-1 space: form j starts q^j + O(q^dim)."""

    weight: int
    forms: tuple
    level_tag: str = "Level1"

    def __post_init__(self) -> None:
        for j, f in enumerate(self.forms):
            lead = f.leading_index()
            if lead != j or f.coefficient(j) != 1:
                raise ValueError(f"basis form {j} is not in echelon position")

    @property
    def dim(self) -> int:
        return len(self.forms)

    @property
    def qprec(self) -> int:
        return min((f.qprec for f in self.forms), default=0)

    @property
    def ring(self):
        return self.forms[0].ring if self.forms else ZZ


def miller_basis(k: int, qprec: int, ring: Ring = ZZ) -> SpaceBasis:
    """Victor Miller's echelon basis of M_k(SL_2(Z)) from E4^a E6^b Delta^c.

    Form j has coefficient 1 at q^j and 0 at every other q^i with i < dim.
    Integral over Z; reduction mod p stays echelon since the pivots are 1.
    """
    if k % 2 != 0:
        raise ValueError(f"odd weight {k} has no level-1 forms")
    d = basis_dimension(k)
    if d == 0:
        return SpaceBasis(k, ())
    if qprec < d:
        raise PrecisionError(f"q-precision {qprec} below dimension {d}")
    e4 = eisenstein(4, qprec, ring)
    e6 = eisenstein(6, qprec, ring)
    dl = delta(qprec, ring)
    monomials = []
    for c in range(d):
        rem = k - 12 * c
        # pick (a, b) with 4a + 6b = rem: b = 0 or 1 by rem mod 4
        b = 0 if rem % 4 == 0 else 1
        a = (rem - 6 * b) // 4
        if a < 0:
            raise ArithmeticError(f"no E4^a E6^b monomial of weight {rem}")
        monomials.append((e4**a) * (e6**b) * (dl**c))
    # clear the q^i tail of each monomial against the later ones
    forms = list(monomials)
    for j in range(d - 2, -1, -1):
        for i in range(j + 1, d):
            cij = forms[j].coefficient(i)
            if cij != 0:
                forms[j] = forms[j] - forms[i].scale(cij)
    return SpaceBasis(k, tuple(forms))


def hasse_invariant(p: int, qprec: int) -> QSeries:
    """E_{p-1} reduced mod p; equal to the constant series 1.

    The reduction being 1 is the statement that E_{p-1} lifts the Hasse
    invariant; it is asserted here, not assumed.
    """
    if p not in SUPPORTED_PRIMES:
        raise ValueError(f"p must be one of {SUPPORTED_PRIMES}, got {p}")
    series = eisenstein(p - 1, qprec, ModRing(p, 1))
    if series != QSeries.constant(1, qprec, ModRing(p, 1)):
        raise ArithmeticError(f"E_{p-1} mod {p} is not 1; corrupted Eisenstein data")
    return series

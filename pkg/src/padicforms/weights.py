"""Weight space coordinates and Iwasawa-polynomial truncations.

A point of weight space on the component i mod (p-1) has coordinate
w = (1+p)^k - 1 for the classical weight k.  Interpolation across a
weight disc is done by Newton divided differences over Z/p^m; every
division by (w_j - w_i) = p^v * unit checks the required divisibility
(the Lambda-interpolation congruence) and lowers the effective
precision by v.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .errors import PrecisionError, VerificationError
from .padic import PadicScalar, _check_pm, val_p


def w_coordinate(k: int, p: int, m: int) -> int:
    """(1+p)^k - 1 reduced mod p^m; valid for any integer k."""
    _check_pm(p, m)
    return (pow(1 + p, k, p**m) - 1) % p**m


@dataclass(frozen=True)
class WeightPoint:
    """A point of weight space: component i mod (p-1) and coordinate w.

    Classical integer weights carry their k; non-classical points have
    k = None and only the pair (component, w).
    """

    p: int
    m: int
    component: int
    w: int
    k: Optional[int] = None

    def __post_init__(self) -> None:
        _check_pm(self.p, self.m)
        object.__setattr__(self, "component", self.component % (self.p - 1))
        object.__setattr__(self, "w", self.w % self.p**self.m)
        if self.k is not None:
            if self.k % (self.p - 1) != self.component:
                raise ValueError(
                    f"weight {self.k} is not on component {self.component} mod {self.p - 1}"
                )
            if self.w != w_coordinate(self.k, self.p, self.m):
                raise ValueError("coordinate w does not match (1+p)^k - 1")

    @classmethod
    def from_integer(cls, k: int, p: int, m: int) -> "WeightPoint":
        return cls(p, m, k % (p - 1), w_coordinate(k, p, m), k)

    def is_classical(self) -> bool:
        return self.k is not None


@dataclass(frozen=True)
class IwasawaTruncation:
    """A polynomial in the disc coordinate w, over Z/p^m.

    Specializing at a classical weight k on the same component gives a
    scalar mod p^m.
    """

    p: int
    component: int
    poly_coeffs: tuple
    m: int

    def __post_init__(self) -> None:
        _check_pm(self.p, self.m)
        object.__setattr__(
            self, "poly_coeffs", tuple(c % self.p**self.m for c in self.poly_coeffs)
        )

    @property
    def degree(self) -> int:
        return len(self.poly_coeffs) - 1

    def evaluate_at_w(self, w: int) -> PadicScalar:
        modulus = self.p**self.m
        acc = 0
        for c in reversed(self.poly_coeffs):
            acc = (acc * w + c) % modulus
        return PadicScalar(acc, self.p, self.m)

    def specialize(self, k: int) -> PadicScalar:
        if k % (self.p - 1) != self.component:
            raise ValueError(
                f"weight {k} is not on component {self.component} mod {self.p - 1}"
            )
        return self.evaluate_at_w(w_coordinate(k, self.p, self.m))


def iwasawa_specialize(truncation: IwasawaTruncation, k: int) -> PadicScalar:
    """Evaluate an Iwasawa truncation at the classical weight k."""
    return truncation.specialize(k)


def interpolate_iwasawa(
    samples: Sequence[Tuple[int, int]],
    p: int,
    m: int,
    component: Optional[int] = None,
) -> IwasawaTruncation:
    """Fit a polynomial in w through (k_j, value_j) by divided differences.

    The result's precision is m minus the accumulated division losses;
    a numerator that fails the required p-power divisibility means the
    data is not Iwasawa-interpolable and raises ``VerificationError``.
    """
    _check_pm(p, m)
    if not samples:
        raise ValueError("interpolation needs at least one sample")
    ks = [k for k, _ in samples]
    if len(set(ks)) != len(ks):
        raise ValueError("sample weights must be distinct")
    if component is None:
        component = ks[0] % (p - 1)
    for k in ks:
        if k % (p - 1) != component:
            raise ValueError("sample weights lie on different components")

    modulus = p**m
    ws = [w_coordinate(k, p, m) for k in ks]
    # divided-difference entries carry their own effective precision
    table: List[Tuple[int, int]] = [(v % modulus, m) for _, v in samples]
    newton: List[Tuple[int, int]] = [table[0]]
    n = len(samples)
    for level in range(1, n):
        nxt: List[Tuple[int, int]] = []
        for i in range(n - level):
            (hi, prec_hi), (lo, prec_lo) = table[i + 1], table[i]
            prec = min(prec_hi, prec_lo)
            delta = (ws[i + level] - ws[i]) % modulus
            v = val_p(delta, p, saturate=m)
            if v >= prec:
                raise PrecisionError(
                    f"weights {ks[i]} and {ks[i + level]} are too close p-adically "
                    f"for precision {prec}"
                )
            num = (hi - lo) % p**prec
            if num % p**v != 0:
                raise VerificationError(
                    "interpolation congruence fails between weights "
                    f"{ks[i]} and {ks[i + level]}: value difference has valuation "
                    f"< {v}"
                )
            unit_inv = pow(delta // p**v, -1, p ** (prec - v))
            nxt.append((((num // p**v) * unit_inv) % p ** (prec - v), prec - v))
        table = nxt
        newton.append(table[0])

    m_eff = min(prec for _, prec in newton)
    if m_eff < 1:
        raise PrecisionError("interpolation lost all precision")
    red = p**m_eff
    # expand Newton form sum c_r prod_{i<r} (w - w_i) into monomials
    poly = [0] * n
    basis_poly = [1] + [0] * (n - 1)  # prod_{i<r}(w - w_i)
    for r, (c, _) in enumerate(newton):
        for d in range(r + 1):
            poly[d] = (poly[d] + c * basis_poly[d]) % red
        if r + 1 < n:
            shifted = [0] * n
            wr = ws[r] % red
            for d in range(r + 1):
                shifted[d + 1] = (shifted[d + 1] + basis_poly[d]) % red
                shifted[d] = (shifted[d] - wr * basis_poly[d]) % red
            basis_poly = shifted
    return IwasawaTruncation(p, component, tuple(poly), m_eff)


def congruence_table(
    samples: Sequence[Tuple[int, int]], p: int, m: int
) -> List[dict]:
    """Observed vs required congruence exponents for all sample pairs.

    The theoretical floor is v_p(a(k) - a(k')) >= v_p(w_k - w_k');
    the table records both sides so the exponent is verified rather
    than asserted a priori.
    """
    out = []
    modulus = p**m
    for i in range(len(samples)):
        for j in range(i + 1, len(samples)):
            k1, a1 = samples[i]
            k2, a2 = samples[j]
            wv = val_p((w_coordinate(k2, p, m) - w_coordinate(k1, p, m)) % modulus, p, saturate=m)
            av = val_p((a2 - a1) % modulus, p, saturate=m)
            out.append(
                {
                    "weights": (k1, k2),
                    "required": wv,
                    "observed": av,
                    "holds": av >= wv,
                }
            )
    return out

"""Local eigencurve data over a weight disc.

The two-variable characteristic series is assembled by computing the
U_p characteristic series at integer sample weights with a shared
basis-shape convention (all samples are twisted up to one common top
weight, so the matrices have one size D) and interpolating each
coefficient as a polynomial in the disc coordinate w.  A verification
pass re-specializes at every sample; slope data at other weights of the
disc are interpolations and flagged as such.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .charseries import CharSeries, NewtonPolygon, char_series, newton_polygon
from .coleman import katz_basis, up_matrix
from .errors import ConfigError, PrecisionError, VerificationError
from .forms import SUPPORTED_PRIMES, basis_dimension
from .padic import PadicScalar
from .weights import IwasawaTruncation, interpolate_iwasawa, w_coordinate


@dataclass(frozen=True)
class WeightDisc:
    """A residue disc of weight space with integer sample weights."""

    p: int
    component: int
    center: int
    sample_weights: tuple
    poly_degree: int
    m: int

    def __post_init__(self) -> None:
        if self.p not in SUPPORTED_PRIMES:
            raise ConfigError(f"p must be one of {SUPPORTED_PRIMES}")
        weights = tuple(sorted(set(self.sample_weights)))
        object.__setattr__(self, "sample_weights", weights)
        if len(weights) < self.poly_degree + 1:
            raise ConfigError("need at least poly_degree + 1 sample weights")
        comp = self.component % (self.p - 1)
        object.__setattr__(self, "component", comp)
        for k in list(weights) + [self.center]:
            if k % (self.p - 1) != comp:
                raise ConfigError(
                    f"weight {k} is not on component {comp} mod {self.p - 1}"
                )
        if min(weights) < 1:
            raise ConfigError("disc samples must be >= 1 (uniform U_p normalization)")


@dataclass(frozen=True)
class TwoVarCharSeries:
    """Characteristic series of U_p over a weight disc.

    ``coeffs[j]`` is c_j(w) as an Iwasawa truncation; specialization at
    a sample weight reproduces the per-weight series exactly to the
    coefficient's effective precision.
    """

    disc: WeightDisc
    top_weight: int
    twist_depth: int
    qprec: int
    coeffs: tuple
    samples: tuple  # ((k, CharSeries), ...)
    reliable_degree: int

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def specialize(self, k: int) -> CharSeries:
        """CharSeries at classical weight k of the disc's component."""
        if k % (self.disc.p - 1) != self.disc.component:
            raise ConfigError(
                f"weight {k} not on component {self.disc.component}"
            )
        m_eff = min(c.m for c in self.coeffs)
        p = self.disc.p
        scalars = tuple(
            PadicScalar(int(c.specialize(k)), p, m_eff) for c in self.coeffs
        )
        return CharSeries(scalars, self.reliable_degree)

    def is_sample(self, k: int) -> bool:
        return k in self.disc.sample_weights


def two_var_charseries(
    disc: WeightDisc, twist_depth: int, qprec: Optional[int] = None
) -> TwoVarCharSeries:
    """Interpolate the U_p characteristic series over the disc.

    ``twist_depth`` is taken at the largest sample weight; smaller
    samples are twisted further so that every per-weight matrix acts on
    a space of the same dimension D = dim M_{top weight}.
    """
    p = disc.p
    k_max = max(disc.sample_weights)
    top = k_max + twist_depth * (p - 1)
    d_total = basis_dimension(top)
    per_weight: List[Tuple[int, CharSeries]] = []
    qprec_used = None
    for k in disc.sample_weights:
        depth_k = twist_depth + (k_max - k) // (p - 1)
        basis = katz_basis(k, p, depth_k, qprec)
        if basis.dimension != d_total:
            raise VerificationError(
                f"dimension mismatch across samples: weight {k} gives "
                f"{basis.dimension}, expected {d_total}"
            )
        qprec_used = basis.qprec if qprec_used is None else min(qprec_used, basis.qprec)
        matrix = up_matrix(basis, disc.m)
        per_weight.append((k, char_series(matrix)))

    coeffs: List[IwasawaTruncation] = [
        IwasawaTruncation(p, disc.component, (1,), disc.m)
    ]
    for j in range(1, d_total + 1):
        samples = [(k, int(series.coeffs[j])) for k, series in per_weight]
        fit = interpolate_iwasawa(samples, p, disc.m, disc.component)
        for k, value in samples:
            got = int(fit.specialize(k))
            if got != value % p**fit.m:
                raise VerificationError(
                    f"re-specialization residual at coefficient {j}, weight {k}"
                )
        coeffs.append(fit)
    return TwoVarCharSeries(
        disc=disc,
        top_weight=top,
        twist_depth=twist_depth,
        qprec=qprec_used,
        coeffs=tuple(coeffs),
        samples=tuple(per_weight),
        reliable_degree=d_total,
    )


def slopes_at(series: TwoVarCharSeries, k: int) -> Tuple[NewtonPolygon, str]:
    """Newton polygon of the specialized series at weight k.

    The flag is "sample" at a sample weight, "interpolated" at other
    classical weights of the component (these are predictions of the
    fitted polynomials, certified only through the interpolation
    precision), never silently extrapolated.
    """
    poly = newton_polygon(series.specialize(k))
    flag = "sample" if series.is_sample(k) else "interpolated"
    return poly, flag


@dataclass(frozen=True)
class LocalPieceReport:
    slope_bound: Fraction
    degrees: dict  # weight -> slope-<=h factor degree
    constant: bool


def local_piece_report(series: TwoVarCharSeries, slope_bound) -> LocalPieceReport:
    """Degree of the slope-at-most-h factor at each sample weight.

    A certified decomposition needs the polygon to break strictly above
    h; a slope exactly equal to h > 0 means the piece can jump within
    the disc and is surfaced as an error.  h = 0 is always clean because
    slopes cannot cross below the floor 0.
    """
    h = Fraction(slope_bound)
    if h < 0:
        raise ConfigError("slope bound must be >= 0")
    degrees: Dict[int, int] = {}
    for k, per_weight_series in series.samples:
        poly = newton_polygon(per_weight_series)
        floor = poly.next_slope_floor
        if floor is not None and floor <= h:
            raise PrecisionError(
                f"slopes near {h} not certified at weight {k} "
                f"(polygon floor {floor})"
            )
        if h > 0 and poly.slopes_at(h) > 0:
            raise PrecisionError(
                f"Newton break at exactly {h} at weight {k}: "
                "no slope-<= h decomposition certified"
            )
        degrees[k] = sum(
            mult for s, mult in zip(poly.slopes, poly.multiplicities) if s <= h
        )
    values = set(degrees.values())
    return LocalPieceReport(h, degrees, len(values) == 1)

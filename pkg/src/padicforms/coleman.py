"""Overconvergent U_p spectral theory on Katz-expansion models.

Overconvergent forms of weight k are modelled as sums b_i * E_{p-1}^{-i}
with b_i running over the new echelon rows of the weight k + i(p-1)
Miller basis; the twist depth I plays the role of the overconvergence
radius and slopes are trusted where they are stable under increasing
(I, Q) and certified by the Newton polygon at the working modulus.

Normalization bookkeeping: the solver computes the matrix of the
weight-independent q-expansion operator  f -> sum a_{np} q^n  (this is
U_p in any weight k >= 1).  The naive operator is p times it and the
weight-k normalized operator is p^{max(0, 1-k)} times it, so their
polygons are exact slope shifts of the base polygon; the shifts are
still cross-checked against independently assembled matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .charseries import (
    CharSeries,
    NewtonPolygon,
    char_series,
    charpoly_reversed,
    newton_polygon,
    newton_polygon_exact,
)
from .errors import ConfigError, PrecisionError, VerificationError
from .forms import SUPPORTED_PRIMES, basis_dimension, eisenstein, miller_basis
from .hecke import up, up_naive
from .hida import tp_matrix
from .linalg import solve_in_basis
from .padic import PadicMatrix, PadicScalar, is_prime
from .qexp import ModRing, QSeries


def _check_even(k: int) -> None:
    if k % 2 != 0:
        raise ConfigError(f"odd weight {k}: level-1 q-expansion models are empty")


@dataclass(frozen=True)
class KatzBasis:
    """Basis of the weight-k overconvergent model up to twist depth I.

    Block i holds the complement-of-image Miller forms b_{i,j} of weight
    k + i(p-1), stored integrally; the pair (i, b_{i,j}) stands for the
    element b_{i,j} * E_{p-1}^{-i}.  Element with global index g has
    q-expansion q^g + O(q^(g+1)), which makes solving in the basis
    lossless.
    """

    p: int
    weight: int
    twist_depth: int
    qprec: int
    blocks: tuple

    @property
    def block_sizes(self) -> tuple:
        return tuple(len(b) for b in self.blocks)

    @property
    def dimension(self) -> int:
        return sum(self.block_sizes)

    def elements_mod(self, m: int) -> List[QSeries]:
        """Evaluate b_{i,j} * E_{p-1}^{-i} over Z/p^m at full q-precision."""
        ring = ModRing(self.p, m)
        e_inv = eisenstein(self.p - 1, self.qprec, ring).inverse()
        out: List[QSeries] = []
        power = QSeries.constant(1, self.qprec, ring)
        for i, block in enumerate(self.blocks):
            if i > 0:
                power = power * e_inv
            for b in block:
                out.append(b.to_ring(ring) * power)
        for g, element in enumerate(out):
            if element.leading_index() != g or element.coefficient(g) != 1:
                raise VerificationError(
                    f"Katz element {g} is not in echelon position"
                )
        return out


def katz_basis(k: int, p: int, twist_depth: int, qprec: Optional[int] = None) -> KatzBasis:
    """Build the Katz-expansion basis at weight k and twist depth I.

    Block sizes are the jumps of the dimension ladder
    dim M_{k + i(p-1)}; q-precision defaults to p*(D+4) and must be at
    least p*D so that one U_p application still determines coordinates.
    """
    if p not in SUPPORTED_PRIMES:
        raise ConfigError(f"p must be one of {SUPPORTED_PRIMES}, got {p}")
    _check_even(k)
    if twist_depth < 0:
        raise ConfigError("twist depth must be >= 0")
    dims = [basis_dimension(k + i * (p - 1)) for i in range(twist_depth + 1)]
    for lo, hi in zip(dims, dims[1:]):
        if hi < lo:
            raise VerificationError("dimension ladder must be nondecreasing")
    total = dims[-1]
    if qprec is None:
        qprec = p * (total + 4)
    if qprec < p * max(total, 1):
        raise PrecisionError(
            f"q-precision {qprec} below p*D = {p * max(total, 1)}"
        )
    blocks = []
    prev = 0
    for i, d in enumerate(dims):
        if d == prev:
            blocks.append(())
            continue
        forms = miller_basis(k + i * (p - 1), qprec).forms
        blocks.append(tuple(forms[prev:d]))
        prev = d
    return KatzBasis(p, k, twist_depth, qprec, tuple(blocks))


def normalization_shift(k: int, kind: str) -> int:
    """Slope shift of a normalization relative to the q-expansion operator."""
    if kind == "qexp":
        return 0
    if kind == "naive":
        return 1
    if kind == "weight":
        return max(0, 1 - k)
    raise ConfigError(f"unknown normalization {kind!r}")


def up_matrix(basis: KatzBasis, m: int, normalization: str = "weight") -> PadicMatrix:
    """Matrix of U_p on the Katz basis over Z/p^m.

    ``normalization`` selects the weight normalization (default), the
    naive operator, or the bare q-expansion operator; the matrix is
    assembled by applying the chosen operator and solving in the basis,
    with the effective precision recorded on the result.
    """
    k = basis.weight
    if normalization == "weight":
        op = lambda f: up(f, k, basis.p)
    elif normalization == "naive":
        op = lambda f: up_naive(f, basis.p)
    elif normalization == "qexp":
        op = lambda f: up(f, 1, basis.p)
    else:
        raise ConfigError(f"unknown normalization {normalization!r}")
    d = basis.dimension
    tag = f"katz:p{basis.p}:k{k}:I{basis.twist_depth}"
    if d == 0:
        return PadicMatrix.from_rows((), basis.p, m, tag)
    elements = basis.elements_mod(m)
    images = [op(f) for f in elements]
    coeff_rows = [[elements[h].coeffs[c] for h in range(d)] for c in range(d)]
    bmat = PadicMatrix.from_rows(coeff_rows, basis.p, m)
    res = solve_in_basis([im.coeffs[:d] for im in images], bmat, budget=0)
    rows = [[res.columns[g][h] for g in range(d)] for h in range(d)]
    return PadicMatrix.from_rows(rows, basis.p, res.m_effective, tag)


def shift_polygon(poly: NewtonPolygon, shift: int) -> NewtonPolygon:
    """Polygon of the operator scaled by p^shift: every slope moves by shift."""
    if shift == 0:
        return poly
    return NewtonPolygon(
        tuple(s + shift for s in poly.slopes),
        poly.multiplicities,
        tuple((j, v + shift * j) for j, v in poly.vertices),
        poly.certified_degree,
        None if poly.next_slope_floor is None else poly.next_slope_floor + shift,
        poly.warning,
    )


@dataclass(frozen=True)
class SlopeReport:
    """Certified slope data of U_p at one weight, with the classical
    comparison attached for k >= 2."""

    p: int
    weight: int
    twist_depth: int
    qprec: int
    m_requested: int
    m_working: int
    m_effective: int
    charseries: CharSeries  # weight-normalized coefficients
    qexp_polygon: NewtonPolygon
    slopes: NewtonPolygon  # weight-normalized
    naive_slopes: NewtonPolygon
    threshold: Fraction
    classical_slopes: Optional[tuple]
    verdicts: tuple
    naive_shift_checked: bool

    @property
    def normalized_multiset(self) -> List[Fraction]:
        return self.slopes.slope_multiset()


def _spectrum_core(
    k: int,
    p: int,
    twist_depth: int,
    m: int,
    qprec: Optional[int],
    certify_below: Optional[Fraction],
):
    """q-expansion-operator matrix and polygon, raising the working
    modulus until the polygon certifies through the requested bound."""
    basis = katz_basis(k, p, twist_depth, qprec)
    d = basis.dimension
    bound = None if certify_below is None else Fraction(certify_below)
    m_work = max(m, (int(bound) + 3) if bound is not None else m)
    cap = m + (int(bound) if bound is not None else 0) * max(d, 2) + 16
    while True:
        matrix = up_matrix(basis, m_work, normalization="qexp")
        series = char_series(matrix)
        poly = newton_polygon(series)
        if bound is None or poly.certifies_through(bound):
            return basis, matrix, series, poly, m_work
        if m_work >= cap:
            raise PrecisionError(
                f"slopes below {bound} not certified at modulus {p}^{m_work} "
                f"(indeterminate at requested precision)"
            )
        m_work = min(cap, m_work + max(4, int(bound)))


def slope_spectrum(
    k: int,
    p: int,
    twist_depth: int,
    m: int,
    qprec: Optional[int] = None,
    certify_below: Optional[Fraction] = None,
    classical: bool = True,
) -> SlopeReport:
    """Newton slopes of U_p on the weight-k overconvergent model.

    All normalized slopes are checked to be >= 0, the naive spectrum is
    cross-checked to sit exactly inf{1,k} above the normalized one, and
    for k >= 2 the classical oracle is attached with a per-slope-class
    verdict below the classicality threshold k-1.
    """
    _check_even(k)
    basis, matrix, series, qpoly, m_work = _spectrum_core(
        k, p, twist_depth, m, qprec, certify_below
    )
    shift = normalization_shift(k, "weight")
    norm_poly = shift_polygon(qpoly, shift)
    for s in norm_poly.slope_multiset():
        if s < 0:
            raise VerificationError(
                f"normalized U_p slope {s} < 0 at weight {k}: theory violated"
            )
    norm_series = _scaled_series(series, shift, p, m_work)

    # independent assembly of the naive matrix; its char series must be
    # the p^j-scaled one, which pins the slope relation exactly
    naive_matrix = up_matrix(basis, m_work, normalization="naive")
    naive_series = char_series(naive_matrix)
    expected = _scaled_series(series, 1, p, m_work)
    naive_checked = naive_series.coeffs == expected.coeffs
    if not naive_checked:
        raise VerificationError("naive U_p char series fails the p-scaling relation")
    naive_poly = shift_polygon(qpoly, 1)

    threshold = Fraction(k - 1)
    classical_slopes = None
    verdicts: List[dict] = []
    if classical and k >= 2:
        classical_slopes = classical_up_spectrum(k, p)
        verdicts = _slope_class_verdicts(norm_poly, classical_slopes, threshold, m)
    return SlopeReport(
        p=p,
        weight=k,
        twist_depth=twist_depth,
        qprec=basis.qprec,
        m_requested=m,
        m_working=m_work,
        m_effective=matrix.m,
        charseries=norm_series,
        qexp_polygon=qpoly,
        slopes=norm_poly,
        naive_slopes=naive_poly,
        threshold=threshold,
        classical_slopes=tuple(classical_slopes) if classical_slopes is not None else None,
        verdicts=tuple(verdicts),
        naive_shift_checked=naive_checked,
    )


def _scaled_series(series: CharSeries, shift: int, p: int, m: int) -> CharSeries:
    coeffs = tuple(
        PadicScalar(int(c) * p ** (shift * j), p, m)
        for j, c in enumerate(series.coeffs)
    )
    return CharSeries(coeffs, series.reliable_degree)


def _slope_class_verdicts(poly, classical_slopes, threshold, m_requested) -> List[dict]:
    bound = min(threshold, Fraction(m_requested - 2))
    over = poly.slopes_below(bound) if poly.certifies_through(bound) else None
    out = []
    if over is None:
        return [{"slope": None, "verdict": "indeterminate"}]
    cl = [s for s in classical_slopes if s < bound]
    for s in sorted(set(over) | set(cl)):
        o, c = over.count(s), cl.count(s)
        verdict = "match" if o == c else ("extra-overconvergent" if o > c else "missing-overconvergent")
        out.append({"slope": s, "overconvergent": o, "classical": c, "verdict": verdict})
    return out


# ---------------------------------------------------------------------------
# classical side


def _legendre(a: int, p: int) -> int:
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def genus_x0(p: int) -> int:
    """Genus of X_0(p) for prime p >= 5."""
    nu2 = 1 + _legendre(-1, p)
    nu3 = 1 + _legendre(-3, p)
    g = Fraction(p + 1, 12) - Fraction(nu2, 4) - Fraction(nu3, 3)
    return int(g)


def dim_cusp_forms_gamma0_prime(k: int, p: int) -> int:
    """dim S_k(Gamma_0(p)) for prime p >= 5 and even k >= 2."""
    if not is_prime(p) or p < 5:
        raise ConfigError(f"dimension formula needs a prime p >= 5, got {p}")
    if k < 2 or k % 2 != 0:
        return 0
    g = genus_x0(p)
    if k == 2:
        return g
    nu2 = 1 + _legendre(-1, p)
    nu3 = 1 + _legendre(-3, p)
    return (k - 1) * (g - 1) + (k // 2 - 1) * 2 + nu2 * (k // 4) + nu3 * (k // 3)


def dim_new_cusp_forms_gamma0_prime(k: int, p: int) -> int:
    """dim S_k^new(Gamma_0(p)) = dim S_k(Gamma_0(p)) - 2 dim S_k(level 1)."""
    level1 = max(basis_dimension(k) - 1, 0)
    new = dim_cusp_forms_gamma0_prime(k, p) - 2 * level1
    if new < 0:
        raise VerificationError("negative new-form dimension: formula inputs corrupt")
    return new


def classical_up_spectrum(k: int, p: int) -> List[Fraction]:
    """U_p slope multiset on weight-k forms of level Gamma_0(p).

    Old part: exact integer Newton slopes of det(x^2 - x T_p + p^(k-1))
    on the full level-1 space (a block companion matrix, so no
    eigensystem factoring is needed).  New cuspidal part: slope (k-2)/2
    with the new-form multiplicity, from the Atkin-Lehner relation; only
    the valuation is used, never the sign.  At k = 2 the only Eisenstein
    series is the ordinary stabilization, of slope 0.
    """
    if k < 2 or k % 2 != 0:
        raise ConfigError(f"classical oracle needs even k >= 2, got {k}")
    slopes: List[Fraction] = []
    d1 = basis_dimension(k)
    if k == 2:
        slopes.append(Fraction(0))  # weight-2 Eisenstein stabilization
    elif d1 > 0:
        t_rows = tp_matrix(k, p)
        c = p ** (k - 1)
        block = [[0] * (2 * d1) for _ in range(2 * d1)]
        for i in range(d1):
            for j in range(d1):
                block[i][j] = t_rows[i][j]
            block[i][d1 + i] = -c
            block[d1 + i][i] = 1
        coeffs = charpoly_reversed(block)
        poly = newton_polygon_exact(coeffs, p)
        slopes.extend(poly.slope_multiset())
    new_mult = dim_new_cusp_forms_gamma0_prime(k, p)
    slopes.extend([Fraction(k - 2, 2)] * new_mult)
    return sorted(slopes)


@dataclass(frozen=True)
class ClassicalityReport:
    p: int
    weight: int
    twist_depth: int
    m_requested: int
    m_working: int
    compared_below: Fraction
    overconvergent: tuple
    classical: tuple
    boundary_overconvergent: Optional[int]
    boundary_classical: int
    verdict: str

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


def classicality_check(
    k: int,
    p: int,
    twist_depth: int,
    m: int,
    qprec: Optional[int] = None,
) -> ClassicalityReport:
    """Compare overconvergent and classical slopes strictly below
    min(k-1, m-2).

    Slope classes at exactly k-1 sit on the classicality boundary and
    are reported separately, never counted on either side.  The working
    modulus is raised internally until the Newton polygon certifies the
    comparison range; if that fails within the cap the verdict is
    indeterminate.
    """
    if k < 2:
        raise ConfigError("classicality comparison needs k >= 2")
    threshold = Fraction(k - 1)
    bound = min(threshold, Fraction(m - 2))
    classical = classical_up_spectrum(k, p)
    try:
        report = slope_spectrum(
            k, p, twist_depth, m, qprec=qprec, certify_below=bound, classical=False
        )
    except PrecisionError:
        return ClassicalityReport(
            p, k, twist_depth, m, m, bound, (), tuple(s for s in classical if s < bound),
            None, sum(1 for s in classical if s == threshold), "indeterminate",
        )
    over_all = report.slopes
    over = sorted(over_all.slopes_below(bound))
    cl = sorted(s for s in classical if s < bound)
    boundary_over = (
        over_all.slopes_at(threshold)
        if over_all.certifies_through(threshold + Fraction(1, 2))
        else None
    )
    boundary_cl = sum(1 for s in classical if s == threshold)
    verdict = "pass" if over == cl else "fail"
    return ClassicalityReport(
        p=p,
        weight=k,
        twist_depth=twist_depth,
        m_requested=m,
        m_working=report.m_working,
        compared_below=bound,
        overconvergent=tuple(over),
        classical=tuple(cl),
        boundary_overconvergent=boundary_over,
        boundary_classical=boundary_cl,
        verdict=verdict,
    )

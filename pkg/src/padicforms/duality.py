"""Degree-0 / degree-1 duality, realized through dual modules.

The degree-1 side is represented as the dual with the transposed
operator (the pairing makes U_p and the Frobenius adjoint), so the
computable consequences are: characteristic series of a matrix and of
its transpose agree exactly; ordinary ranks agree on both sides; the
adjunction identity holds for any pairing matrix; and the theta probe
relates the weight 2-k and weight k spectra by the slope shift k-1.

The theta probe compares slopes of the q-expansion operator
f -> sum a_{np} q^n on both sides, where the chain
U_p^naive . theta^(k-1) = p^(k-1) theta^(k-1) . U_p^naive gives the
shift.  theta^(k-1) kills the constants, which only live at source
weight 0 (k = 2); that class is excluded and reported rather than
counted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from .charseries import char_series, newton_polygon
from .coleman import katz_basis, slope_spectrum, up_matrix
from .errors import ConfigError, PrecisionError, VerificationError
from .linalg import invert_unimodular, ordinary_projector
from .padic import PadicMatrix


@dataclass(frozen=True)
class DualFamily:
    """Dual of an ordinary block: the pairing matrix and the operator
    acting on the dual side (transpose in gram-dual coordinates)."""

    rank: int
    gram: PadicMatrix
    operator_on_dual: PadicMatrix

    def __post_init__(self) -> None:
        if self.gram.size != self.rank:
            raise ValueError("gram matrix size must equal the source rank")


def dual_module(up_matrix_block: PadicMatrix, gram: Optional[PadicMatrix] = None) -> DualFamily:
    """Dual module of a U_p block: the Frobenius side acts by the
    gram-conjugated transpose (identity gram by default)."""
    n = up_matrix_block.size
    if gram is None:
        gram = PadicMatrix.identity(n, up_matrix_block.p, up_matrix_block.m)
    if gram.size != n:
        raise ValueError("gram matrix size mismatch")
    f_op = invert_unimodular(gram) @ up_matrix_block.transpose() @ gram
    return DualFamily(n, gram, f_op)


def adjunction_check(
    f_coords: Sequence[int],
    g_coords: Sequence[int],
    up_mat: PadicMatrix,
    gram: Optional[PadicMatrix] = None,
    f_op: Optional[PadicMatrix] = None,
) -> bool:
    """Verify <U_p f, g> = <f, F g> exactly over Z/p^m.

    The pairing is <x, y> = x^T gram y; F defaults to the gram-dual
    transpose of U_p, and a perturbed F makes the check fail.
    """
    n = up_mat.size
    p, m = up_mat.p, up_mat.m
    modulus = p**m
    if gram is None:
        gram = PadicMatrix.identity(n, p, m)
    if f_op is None:
        f_op = dual_module(up_mat, gram).operator_on_dual
    uf = up_mat.apply(f_coords)
    fg = f_op.apply(g_coords)
    lhs = sum(
        uf[i] * gram.rows[i][j] * (g_coords[j] % modulus)
        for i in range(n)
        for j in range(n)
    ) % modulus
    rhs = sum(
        (f_coords[i] % modulus) * gram.rows[i][j] * fg[j]
        for i in range(n)
        for j in range(n)
    ) % modulus
    return lhs == rhs


def transpose_charseries_equal(matrix: PadicMatrix) -> bool:
    """Characteristic series of U and U^T agree exactly (always true;
    verified rather than assumed)."""
    return char_series(matrix).coeffs == char_series(matrix.transpose()).coeffs


def rank_duality_check(matrix: PadicMatrix, projector_m: int = 5) -> dict:
    """rank e(U_p) = rank e(F) with F the transposed operator.

    Both projectors are computed by the factorial iteration at a
    reduced modulus (the rank of an idempotent is stable under
    reduction), so this stays cheap on large matrices.
    """
    m_use = min(projector_m, matrix.m)
    reduced = matrix.reduce(m_use)
    r_source = ordinary_projector(reduced).rank
    r_dual = ordinary_projector(reduced.transpose()).rank
    return {"rank_source": r_source, "rank_dual": r_dual, "equal": r_source == r_dual}


@dataclass(frozen=True)
class ThetaProbeClass:
    source_qslope: Fraction
    target_qslope: Fraction
    present: bool
    kernel_excluded: bool


@dataclass(frozen=True)
class ThetaProbeReport:
    p: int
    weight: int  # k; the source lives at weight 2-k
    shift: int
    bound: Fraction
    classes: tuple
    control_shift: int
    control_contained: bool  # the negative control must NOT be contained

    @property
    def passed(self) -> bool:
        return all(c.present or c.kernel_excluded for c in self.classes) and (
            not self.control_contained
        )


def _certified_qexp_polygon(k: int, p: int, twist_depth: int, m: int, bound: Fraction):
    """q-expansion-operator polygon certified through ``bound``."""
    report = slope_spectrum(k, p, twist_depth, m, classical=False)
    poly = report.qexp_polygon
    m_work = report.m_working
    while not poly.certifies_through(bound):
        if m_work > m + 120:
            raise PrecisionError(
                f"weight-{k} q-slopes below {bound} not certified "
                f"(indeterminate at modulus {p}^{m_work})"
            )
        m_work += max(4, int(bound))
        report = slope_spectrum(k, p, twist_depth, m_work, classical=False)
        poly = report.qexp_polygon
    return poly


def theta_probe(
    k: int,
    p: int,
    m: int,
    twist_depth_source: Optional[int] = None,
    twist_depth_target: Optional[int] = None,
    source_bound: Fraction = Fraction(4),
) -> ThetaProbeReport:
    """Check that weight 2-k slopes reappear at weight k shifted by k-1.

    Slopes here are those of the q-expansion operator sum a_{np} q^n on
    the Katz models of both weights; the comparison runs over source
    slopes below ``source_bound`` with both polygons certified far
    enough, and the negative control re-runs the containment with the
    wrong shift k.
    """
    if k < 2:
        raise ConfigError("theta probe needs k >= 2")
    shift = k - 1
    bound = Fraction(source_bound)
    if twist_depth_source is None:
        twist_depth_source = _default_depth(2 - k, p, 6)
    if twist_depth_target is None:
        twist_depth_target = _default_depth(k, p, 8)
    src_poly = _certified_qexp_polygon(2 - k, p, twist_depth_source, m, bound)
    tgt_poly = _certified_qexp_polygon(k, p, twist_depth_target, m, bound + k + 1)
    source = [s for s in src_poly.slope_multiset() if s < bound]
    target = tgt_poly.slope_multiset()

    classes: List[ThetaProbeClass] = []
    kernel_budget = 1 if k == 2 else 0  # constants at source weight 0
    remaining = list(target)
    for s in sorted(source):
        image = s + shift
        if image in remaining:
            remaining.remove(image)
            classes.append(ThetaProbeClass(s, image, True, False))
        elif kernel_budget and s == 0:
            kernel_budget -= 1
            classes.append(ThetaProbeClass(s, image, False, True))
        else:
            classes.append(ThetaProbeClass(s, image, False, False))

    if all(c.kernel_excluded for c in classes):
        raise PrecisionError(
            "theta probe is vacuous: no non-kernel source classes below the bound"
        )
    control_pool = list(target)
    control_ok = True
    for s in sorted(source):
        cls = next(c for c in classes if c.source_qslope == s)
        if cls.kernel_excluded:
            continue
        image = s + k
        if image in control_pool:
            control_pool.remove(image)
        else:
            control_ok = False
    return ThetaProbeReport(
        p=p,
        weight=k,
        shift=shift,
        bound=bound,
        classes=tuple(classes),
        control_shift=k,
        control_contained=control_ok,
    )


def _default_depth(k: int, p: int, min_dim: int) -> int:
    from .forms import basis_dimension

    depth = 0
    while basis_dimension(k + depth * (p - 1)) < min_dim:
        depth += 1
    return depth


@dataclass(frozen=True)
class DualityReport:
    p: int
    weight: int
    structural_equal: bool
    rank_duality: dict
    theta: ThetaProbeReport

    @property
    def passed(self) -> bool:
        return (
            self.structural_equal
            and self.rank_duality["equal"]
            and self.theta.passed
        )

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"


def charseries_duality_check(
    k: int, p: int, twist_depth: int, m: int
) -> DualityReport:
    """Combined duality verdict at weight k.

    (a) structural: char series of the weight-k U_p matrix equals that
    of its transpose, exactly; (b) ordinary rank agrees on both sides;
    (c) the theta probe relates the weight 2-k and weight k spectra by
    the slope shift k-1, with the wrong shift failing.
    """
    basis = katz_basis(k, p, twist_depth)
    matrix = up_matrix(basis, m)
    structural = transpose_charseries_equal(matrix)
    ranks = rank_duality_check(matrix)
    probe = theta_probe(k, p, m)
    return DualityReport(p, k, structural, ranks, probe)

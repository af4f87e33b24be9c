"""Ordinary (Hida-theoretic) structure of the classical spaces.

Mod-p spaces and their Hasse tower, ordinary ranks, the weight-raising
control check, and interpolation of ordinary eigen-data across a weight
progression into an Iwasawa-polynomial family.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import ConfigError, PrecisionError, VerificationError
from .forms import SUPPORTED_PRIMES, SpaceBasis, basis_dimension, miller_basis
from .hecke import hecke_tp
from .linalg import echelon_mod_p, in_row_span_mod_p, ordinary_projector
from .padic import PadicMatrix, is_prime, val_p
from .qexp import ModRing, QSeries, ZZ
from .weights import IwasawaTruncation, congruence_table, interpolate_iwasawa


def _check_theory_prime(p: int) -> None:
    if p not in SUPPORTED_PRIMES:
        raise ConfigError(f"p-adic theory is configured for p in {SUPPORTED_PRIMES}")


def default_qprec(k: int, operator_primes: Sequence[int]) -> int:
    """q-precision sufficient to write operator images in the basis."""
    d = basis_dimension(k)
    return max(operator_primes) * (d + 3) + 4


def operator_matrix(basis: SpaceBasis, op) -> Tuple[Tuple[int, ...], ...]:
    """Matrix of an operator in an echelon basis (columns = images).

    In a reduced echelon basis the coordinates of g are just its first
    dim coefficients; the full available q-expansion of the
    reconstruction is checked against g, so an operator that does not
    preserve the space is caught rather than silently projected.
    """
    d = basis.dim
    if d == 0:
        return ()
    images = [op(f) for f in basis.forms]
    qcheck = min(im.qprec for im in images)
    if qcheck < d:
        raise PrecisionError(
            f"operator image precision {qcheck} below dimension {d}"
        )
    cols = [im.coeffs[:d] for im in images]
    for j, im in enumerate(images):
        recon = None
        for i, f in enumerate(basis.forms):
            term = f.scale(cols[j][i])
            recon = term if recon is None else recon + term
        if recon.truncate(qcheck) != im.truncate(qcheck):
            raise VerificationError(
                f"operator image of basis form {j} leaves the space"
            )
    return tuple(tuple(cols[j][i] for j in range(d)) for i in range(d))


def tp_matrix(k: int, p: int, qprec: Optional[int] = None, ring=ZZ):
    """Matrix of T_p on the Miller basis of M_k, exact over the ring."""
    if not is_prime(p):
        raise ConfigError(f"{p} is not prime")
    if qprec is None:
        qprec = default_qprec(k, [p])
    basis = miller_basis(k, qprec, ring)
    return operator_matrix(basis, lambda f: hecke_tp(f, k, p))


def mod_p_space(k: int, p: int, qprec: Optional[int] = None) -> SpaceBasis:
    """Reduction mod p of the Miller basis; stays echelon since pivots are 1."""
    _check_theory_prime(p)
    if qprec is None:
        qprec = default_qprec(k, [p])
    return miller_basis(k, qprec, ModRing(p, 1))


def ordinary_rank_mod_p(k: int, p: int, qprec: Optional[int] = None) -> int:
    """Rank of e(T_p) on the mod-p weight-k space (T_p = U_p here, k >= 2)."""
    if k < 2:
        raise ConfigError(f"ordinary rank needs k >= 2, got {k}")
    _check_theory_prime(p)
    basis = mod_p_space(k, p, qprec)
    if basis.dim == 0:
        return 0
    rows = operator_matrix(basis, lambda f: hecke_tp(f, k, p))
    matrix = PadicMatrix.from_rows(rows, p, 1, basis_tag=f"miller:{k}")
    return ordinary_projector(matrix).rank


@dataclass(frozen=True)
class HasseTower:
    """Mod-p spaces at weights k, k+(p-1), ..., with the identity-on-q-expansions
    inclusions that exist because the Hasse invariant has q-expansion 1."""

    p: int
    base_weight: int
    levels: tuple


def build_hasse_tower(k: int, p: int, n: int, qprec: Optional[int] = None) -> HasseTower:
    _check_theory_prime(p)
    if qprec is None:
        qprec = default_qprec(k + n * (p - 1), [p])
    levels = [mod_p_space(k + j * (p - 1), p, qprec) for j in range(n + 1)]
    for lower, upper in zip(levels, levels[1:]):
        ech, piv = echelon_mod_p([f.coeffs for f in upper.forms], p)
        for f in lower.forms:
            if not in_row_span_mod_p(f.coeffs, ech, piv, p):
                raise VerificationError(
                    f"Hasse tower inclusion fails from weight {lower.weight} "
                    f"to {upper.weight}"
                )
    return HasseTower(p, k, tuple(levels))


@dataclass(frozen=True)
class ControlReport:
    p: int
    k: int
    n: int
    target_weight: int
    rank_high: int
    rank_low: int
    contained: bool
    weight2_twist: bool = False

    @property
    def passed(self) -> bool:
        return self.contained


def _ordinary_image_qexpansions(basis: SpaceBasis, p: int) -> List[Tuple[int, ...]]:
    """q-expansions spanning e(T_p) applied to a mod-p space."""
    if basis.dim == 0:
        return []
    rows = operator_matrix(basis, lambda f: hecke_tp(f, basis.weight, p))
    matrix = PadicMatrix.from_rows(rows, p, 1)
    idem = ordinary_projector(matrix).idempotent
    qprec = basis.qprec
    out = []
    for j in range(basis.dim):
        acc = [0] * qprec
        for i in range(basis.dim):
            c = idem.rows[i][j]
            if c:
                for t, a in enumerate(basis.forms[i].coeffs[:qprec]):
                    acc[t] = (acc[t] + c * a) % p
        out.append(tuple(acc))
    ech, _ = echelon_mod_p(out, p)
    return ech


def control_check_h0(
    k: int, p: int, n: int, qprec: Optional[int] = None
) -> ControlReport:
    """Verify e(U_p) M_{k+n(p-1)}(F_p) sits inside M_k(F_p) as q-expansions.

    The weight-k target uses the identity embedding through the Hasse
    tower.  Requires k >= 3 (the control-theorem bound); the k = 2
    boundary case has its own check with one extra twist on the target.
    """
    _check_theory_prime(p)
    if k < 3:
        raise ConfigError("control check requires k >= 3; use the weight-2 variant")
    if n < 0:
        raise ConfigError("n must be >= 0")
    return _control_core(k, p, n, target_weight=k, qprec=qprec, twist=False)


def control_check_h0_weight2(p: int, n: int, qprec: Optional[int] = None) -> ControlReport:
    """Weight-2 boundary variant: the classical side allows one extra
    Hasse twist, so containment is tested in M_{2+(p-1)}(F_p)."""
    _check_theory_prime(p)
    return _control_core(2, p, n, target_weight=2 + (p - 1), qprec=qprec, twist=True)


def _control_core(k, p, n, target_weight, qprec, twist) -> ControlReport:
    high_weight = k + n * (p - 1)
    if qprec is None:
        qprec = default_qprec(high_weight, [p])
    high = mod_p_space(high_weight, p, qprec)
    low = mod_p_space(target_weight, p, qprec)
    image = _ordinary_image_qexpansions(high, p)
    rank_high = len(image)
    low_ech, low_piv = echelon_mod_p([f.coeffs for f in low.forms], p) if low.dim else ([], [])
    contained = all(in_row_span_mod_p(v, low_ech, low_piv, p) for v in image)
    rank_low = (
        ordinary_rank_mod_p(target_weight, p, qprec) if target_weight >= 2 else 0
    )
    return ControlReport(p, k, n, target_weight, rank_high, rank_low, contained, twist)


def unit_root_of_stabilization(t_p: int, k: int, p: int, m: int) -> int:
    """Unit root of x^2 - t_p x + p^(k-1) mod p^m, by Hensel iteration.

    This is the U_p eigenvalue of the ordinary p-stabilization of an
    eigenform with T_p eigenvalue t_p (a unit).
    """
    modulus = p**m
    if t_p % p == 0:
        raise ValueError("t_p must be a unit for an ordinary stabilization")
    c = pow(p, k - 1, modulus) if k >= 1 else pow(p, k - 1, modulus)
    x = t_p % modulus
    for _ in range(m.bit_length() + 2):
        fx = (x * x - t_p * x + c) % modulus
        if fx == 0:
            break
        dfx = (2 * x - t_p) % modulus
        x = (x - fx * pow(dfx, -1, modulus)) % modulus
    if (x * x - t_p * x + c) % modulus != 0:
        raise VerificationError("Hensel iteration for the unit root did not converge")
    return x


@dataclass(frozen=True)
class EigenSystem:
    """A rank-1 ordinary eigensystem over Z/p^m at one weight."""

    weight: int
    key: tuple  # mod-p eigenvalue tuple over the configured primes
    eigenvalues: dict  # prime -> eigenvalue mod p^m (a_p = U_p unit root)


@dataclass(frozen=True)
class OrdinaryFamily:
    """Ordinary eigen-data across a weight progression with fitted
    Iwasawa polynomials; rank is constant across the sample weights."""

    p: int
    component: int
    sample_weights: tuple
    rank: int
    eigen_data: dict  # weight -> {prime -> tuple of eigenvalues per system}
    keys: tuple  # canonical order of the matched eigensystem keys
    fitted: dict  # prime -> {key -> IwasawaTruncation}
    congruence_checks: tuple
    unsplit_blocks: tuple = ()
    m: int = 1


def _restrict_to_image(op_mat: PadicMatrix, image_cols: List[Tuple[int, ...]], pivot_rows: List[int], p: int, m: int) -> PadicMatrix:
    """Matrix of an operator on the column span of an idempotent.

    ``image_cols`` are columns spanning im(e) whose restriction to
    ``pivot_rows`` is unimodular; commuting operators preserve the span.
    """
    from .linalg import solve_in_basis

    r = len(image_cols)
    modulus = p**m
    images = []
    for col in image_cols:
        images.append(op_mat.apply(col))
    pivot_block = PadicMatrix.from_rows(
        [[image_cols[j][i] for j in range(r)] for i in pivot_rows], p, m
    )
    rhs = [[im[i] for i in pivot_rows] for im in images]
    res = solve_in_basis(rhs, pivot_block, budget=0)
    coords = res.columns
    # verify on all rows, not only the pivot block
    d = len(image_cols[0])
    for j, im in enumerate(images):
        for i in range(d):
            acc = sum(coords[j][t] * image_cols[t][i] for t in range(r)) % modulus
            if acc != im[i] % modulus:
                raise VerificationError("operator does not preserve the ordinary image")
    return PadicMatrix.from_rows(
        [[coords[j][i] for j in range(r)] for i in range(r)], p, m
    )


def _poly_roots_mod_p(coeffs: Sequence[int], p: int) -> Dict[int, int]:
    """Roots in F_p of a monic polynomial, with multiplicities.

    Small p only (the supported theory primes), by scanning residues
    and repeated synthetic division.
    """
    work = [c % p for c in coeffs]
    roots: Dict[int, int] = {}
    for r in range(p):
        while len(work) > 1:
            acc = 0
            for c in work:
                acc = (acc * r + c) % p
            if acc != 0:
                break
            # synthetic division by (x - r)
            out = []
            carry = 0
            for c in work[:-1]:
                carry = (carry * r + c) % p
                out.append(carry)
            work = out
            roots[r] = roots.get(r, 0) + 1
    return roots


def _independent_columns(idem: PadicMatrix, rank: int, p: int):
    """Columns of an idempotent spanning its image, plus pivot rows on
    which their restriction is unimodular."""
    d = idem.size
    cols = [tuple(idem.rows[i][j] for i in range(d)) for j in range(d)]
    chosen: List[Tuple[int, ...]] = []
    for j in range(d):
        cand = [list(c) for c in chosen] + [list(cols[j])]
        if len(echelon_mod_p(cand, p)[0]) > len(chosen):
            chosen.append(cols[j])
        if len(chosen) == rank:
            break
    _, pivot_rows = echelon_mod_p([list(c) for c in chosen], p)
    return chosen, pivot_rows


def _split_ordinary_systems(
    weight: int,
    op_mats: Dict[int, PadicMatrix],
    p: int,
    m: int,
    primes: Sequence[int],
):
    """Split the ordinary block into rank-1 eigensystems where mod-p
    eigenvalues separate; inseparable parts are reported unsplit."""
    from .charseries import charpoly_reversed

    proj = ordinary_projector(op_mats[p])
    e = proj.idempotent
    r = proj.rank
    if r == 0:
        return [], [], 0
    chosen, pivot_rows = _independent_columns(e, r, p)
    restricted = {
        ell: _restrict_to_image(mat, chosen, pivot_rows, p, m)
        for ell, mat in op_mats.items()
    }

    if r == 1:
        systems = [_make_system(weight, restricted, p, m, primes, None)]
        return systems, [], 1

    # find an operator whose mod-p spectrum the projectors can separate
    for ell in [p] + [q for q in primes if q != p]:
        s_mat = restricted[ell]
        cp = charpoly_reversed(s_mat.rows, p)  # reversed charpoly mod p
        # reversed coefficients of det(xI - S) read the same backwards
        mon = list(cp)  # [1, c1, ..., cr] with det(xI-S) = x^r + c1 x^(r-1)...
        roots = _poly_roots_mod_p(mon, p)
        if not roots:
            continue
        blocks = []
        covered = 0
        ok = True
        for root, mult in sorted(roots.items()):
            hpoly = _divide_out_root(mon, root, mult, p)
            h_mat = _evaluate_poly(s_mat, hpoly, p, m)
            sub = ordinary_projector(h_mat)
            if sub.rank != mult:
                ok = False
                break
            blocks.append((root, sub.idempotent, mult))
            covered += mult
        if not ok:
            continue
        leftover = r - covered
        if all(mult == 1 for _, _, mult in blocks) and leftover == 0:
            systems = []
            for root, idem, _ in blocks:
                sub_restricted = _restrict_operators_to_subblock(
                    restricted, idem, p, m
                )
                systems.append(_make_system(weight, sub_restricted, p, m, primes, root))
            return systems, [], r
    # could not split into rank-1 pieces: report the block unsplit
    block_info = {
        "weight": weight,
        "rank": r,
        "charpoly_mod_p": {
            ell: tuple(c % p for c in charpoly_reversed(mat.rows, p))
            for ell, mat in restricted.items()
        },
    }
    return [], [block_info], r


def _divide_out_root(mon: List[int], root: int, mult: int, p: int) -> List[int]:
    """Charpoly mod p divided by (x - root)^mult; descending coefficients."""
    work = [c % p for c in mon]
    for _ in range(mult):
        out = []
        carry = 0
        for c in work[:-1]:
            carry = (carry * root + c) % p
            out.append(carry)
        work = out
    return work


def _evaluate_poly(mat: PadicMatrix, mon_desc: Sequence[int], p: int, m: int) -> PadicMatrix:
    """Evaluate a polynomial (descending integer coefficients) at a matrix."""
    n = mat.size
    acc = PadicMatrix.zero(n, p, m)
    one = PadicMatrix.identity(n, p, m)
    for c in mon_desc:
        acc = acc @ mat + one.scale(int(c))
    return acc


def _restrict_operators_to_subblock(restricted, idem, p, m):
    rank = int(idem.trace())
    chosen, pivot_rows = _independent_columns(idem, rank, p)
    return {
        ell: _restrict_to_image(mat, chosen, pivot_rows, p, m)
        for ell, mat in restricted.items()
    }


def _make_system(weight, restricted, p, m, primes, root) -> EigenSystem:
    eigenvalues = {}
    for ell in primes:
        mat = restricted[ell]
        if mat.size != 1:
            raise VerificationError("eigensystem block is not one-dimensional")
        val = mat.rows[0][0]
        if ell == p:
            val = unit_root_of_stabilization(val, weight, p, m)
        eigenvalues[ell] = val
    key = tuple(eigenvalues[ell] % p for ell in primes)
    return EigenSystem(weight, key, eigenvalues)


def fit_family(
    p: int,
    component: int,
    sample_weights: Sequence[int],
    hecke_primes: Sequence[int],
    m: int,
) -> OrdinaryFamily:
    """Interpolate ordinary eigen-data across congruent sample weights.

    At each weight the T_p matrix on the Miller basis is lifted to
    Z/p^m, projected to its ordinary part, and split into eigensystems
    matched across weights by their mod-p eigenvalue tuples.  Each a_ell
    is then fitted as a polynomial in w by divided differences, and the
    interpolation congruences are recorded.  A rank change across
    weights contradicts the control theorem and is a hard failure.
    """
    _check_theory_prime(p)
    weights = sorted(set(sample_weights))
    if len(weights) < 1:
        raise ConfigError("need at least one sample weight")
    for k in weights:
        if k % (p - 1) != component % (p - 1):
            raise ConfigError(f"weight {k} not on component {component} mod {p - 1}")
        if k < 3:
            raise ConfigError("sample weights must be >= 3 for the control theorem")
    primes = list(dict.fromkeys(hecke_primes))
    for ell in primes:
        if not is_prime(ell):
            raise ConfigError(f"Hecke prime {ell} is not prime")

    per_weight_systems: Dict[int, List[EigenSystem]] = {}
    unsplit = []
    ranks = {}
    op_primes = list(dict.fromkeys(primes + [p]))
    for k in weights:
        qprec = default_qprec(k, op_primes)
        basis = miller_basis(k, qprec)
        if basis.dim == 0:
            ranks[k] = 0
            per_weight_systems[k] = []
            continue
        mats = {}
        for ell in op_primes:
            rows = operator_matrix(basis, lambda f, ell=ell: hecke_tp(f, k, ell))
            mats[ell] = PadicMatrix.from_rows(rows, p, m, basis_tag=f"miller:{k}")
        systems, blocks, rank = _split_ordinary_systems(k, mats, p, m, primes)
        per_weight_systems[k] = systems
        unsplit.extend(blocks)
        ranks[k] = rank

    rank_set = set(ranks.values())
    if len(rank_set) != 1:
        raise VerificationError(
            f"ordinary rank is not constant across weights: {ranks} "
            "(control theorem violation)"
        )
    rank = rank_set.pop()

    keys_per_weight = [
        tuple(sorted(s.key for s in per_weight_systems[k])) for k in weights
    ]
    if primes and len(set(keys_per_weight)) > 1:
        raise VerificationError(
            "eigensystem keys do not match across weights; family matching failed"
        )
    keys = keys_per_weight[0] if primes else ()

    eigen_data = {
        k: {
            ell: tuple(
                s.eigenvalues[ell]
                for s in sorted(per_weight_systems[k], key=lambda s: s.key)
            )
            for ell in primes
        }
        for k in weights
    }

    fitted: Dict[int, Dict[tuple, IwasawaTruncation]] = {}
    congruences = []
    for ell in primes:
        fitted[ell] = {}
        for idx, key in enumerate(keys):
            samples = [(k, eigen_data[k][ell][idx]) for k in weights]
            fit = interpolate_iwasawa(samples, p, m, component % (p - 1))
            for k, value in samples:
                observed = fit.specialize(k)
                if observed.residue != value % p**fit.m:
                    raise VerificationError(
                        f"fitted a_{ell} fails to reproduce the weight-{k} sample"
                    )
            fitted[ell][key] = fit
            for entry in congruence_table(samples, p, m):
                entry = dict(entry)
                entry["prime"] = ell
                entry["system"] = idx
                congruences.append(entry)
                if not entry["holds"]:
                    raise VerificationError(
                        f"interpolation congruence fails for a_{ell}: {entry}"
                    )

    return OrdinaryFamily(
        p=p,
        component=component % (p - 1),
        sample_weights=tuple(weights),
        rank=rank,
        eigen_data=eigen_data,
        keys=keys,
        fitted=fitted,
        congruence_checks=tuple(congruences),
        unsplit_blocks=tuple(unsplit),
        m=m,
    )

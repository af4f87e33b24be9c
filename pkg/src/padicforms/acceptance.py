"""The acceptance suite: ten independently checkable criteria.

Each criterion function returns a ``CriterionResult`` and never weakens
its stated tolerance: everything here is exact (zero tolerance), with
slope comparisons restricted to the certified range of the relevant
Newton polygons.  Randomized criteria draw from a seeded generator so
runs are reproducible byte for byte.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence

from .coleman import classicality_check, katz_basis, slope_spectrum, up_matrix
from .duality import (
    adjunction_check,
    rank_duality_check,
    theta_probe,
    transpose_charseries_equal,
)
from .eigencurve import WeightDisc, local_piece_report, two_var_charseries
from .forms import delta, eisenstein, miller_basis
from .hecke import frobenius, hecke_tp, up, up_naive
from .hida import (
    control_check_h0,
    fit_family,
    mod_p_space,
    operator_matrix,
    ordinary_projector,
    ordinary_rank_mod_p,
)
from .linalg import rank_mod_p
from .padic import PadicMatrix, val_p
from .qexp import QSeries


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    details: List[str] = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number}: {self.name}"


def _random_matrix(rng, n, p, m):
    return PadicMatrix.from_rows(
        [[rng.getrandbits(40) % p**m for _ in range(n)] for _ in range(n)], p, m
    )


def _random_unimodular(rng, n, p, m):
    modulus = p**m
    lower = [
        [1 if i == j else (rng.getrandbits(40) % modulus if i > j else 0) for j in range(n)]
        for i in range(n)
    ]
    upper = [
        [1 if i == j else (rng.getrandbits(40) % modulus if i < j else 0) for j in range(n)]
        for i in range(n)
    ]
    return PadicMatrix.from_rows(lower, p, m) @ PadicMatrix.from_rows(upper, p, m)


# configurations shared by the slope criteria; I is the twist depth
SLOPE_CONFIGS = {
    (2, 5): {"I": 12, "m": 10},
    (4, 5): {"I": 12, "m": 10},
    (12, 5): {"I": 24, "m": 10},
    (4, 7): {"I": 10, "m": 10},
}

CLASSICALITY_CONFIGS = {
    (4, 5): {"I": 15, "m": 10},
    (12, 5): {"I": 30, "m": 10},
}


def criterion_1(seed: int = 0) -> CriterionResult:
    """Projector algebra on 1000 random matrices per (p, m)."""
    rng = random.Random(seed)
    details = []
    ok = True
    for p, m in [(5, 4), (7, 3)]:
        sizes = list(range(2, m + 1))
        checked = 0
        for i in range(1000):
            n = sizes[i % len(sizes)]
            t = _random_matrix(rng, n, p, m)
            res = ordinary_projector(t)
            e = res.idempotent
            one = PadicMatrix.identity(n, p, m)
            if (e @ e) != e or (e @ t) != (t @ e):
                ok = False
                break
            # T invertible mod p on im(e): T e + (1 - e) is unimodular
            if rank_mod_p(((t @ e) + (one - e)).rows, p) != n:
                ok = False
                break
            # T^m kills ker(e) mod p
            if not ((t**m) @ (one - e)).reduce(1).is_zero():
                ok = False
                break
            checked += 1
        details.append(f"(p,m)=({p},{m}): {checked}/1000 random matrices, exact")
        if not ok:
            details.append(f"failure at sample {checked}")
            break
    return CriterionResult(1, "ordinary projector algebra", ok, details)


def _tp_branch_high(f: QSeries, k: int, p: int) -> QSeries:
    # sum a_{np} q^n + p^(k-1) sum a_n q^(np), written out independently
    q = f.qprec // p
    out = []
    for n in range(q):
        c = f.coeffs[n * p]
        if n % p == 0:
            c += p ** (k - 1) * f.coeffs[n // p]
        out.append(c)
    return QSeries(f.ring, tuple(out))


def _tp_branch_low(f: QSeries, k: int, p: int) -> QSeries:
    # p^(1-k) sum a_{np} q^n + sum a_n q^(np)
    q = f.qprec // p
    out = []
    for n in range(q):
        c = p ** (1 - k) * f.coeffs[n * p]
        if n % p == 0:
            c += f.coeffs[n // p]
        out.append(c)
    return QSeries(f.ring, tuple(out))


def criterion_2(seed: int = 0) -> CriterionResult:
    """Hecke normalization: eigenvalues of E_4 and Delta, k = 1 branches."""
    details = []
    e4 = eisenstein(4, 250)
    ok = hecke_tp(e4, 4, 5) == e4.scale(126).truncate(50)
    details.append(f"T_5 E_4 = 126 E_4 to q^50: {'ok' if ok else 'FAIL'}")
    d = delta(100)
    good = hecke_tp(d, 12, 2) == d.scale(-24).truncate(50)
    ok = ok and good
    details.append(f"T_2 Delta = -24 Delta to q^50: {'ok' if good else 'FAIL'}")
    rng = random.Random(seed)
    agree = 0
    for _ in range(100):
        f = QSeries.from_coeffs([rng.randrange(-999, 999) for _ in range(40)])
        if (
            _tp_branch_high(f, 1, 5)
            == _tp_branch_low(f, 1, 5)
            == hecke_tp(f, 1, 5)
        ):
            agree += 1
    ok = ok and agree == 100
    details.append(f"k=1 branch agreement on {agree}/100 random series")
    return CriterionResult(2, "Hecke normalization", ok, details)


def criterion_3(seed: int = 0) -> CriterionResult:
    """T_p = U_p mod p (k in [2,40]); T_p = U_p + p^(k-1) F over Z (k in [4,20])."""
    ok = True
    details = []
    for p in (5, 7):
        for k in range(2, 42, 2):
            basis = mod_p_space(k, p)
            if basis.dim == 0:
                continue
            tp_rows = operator_matrix(basis, lambda f: hecke_tp(f, k, p))
            up_rows = operator_matrix(basis, lambda f: up(f, k, p))
            if tp_rows != up_rows:
                ok = False
                details.append(f"mod-p congruence FAILS at (k,p)=({k},{p})")
    if ok:
        details.append("matrix(T_p) = matrix(U_p) mod p for even k in [2,40], p in {5,7}")
    rng = random.Random(seed)
    exact = True
    for p in (5, 7):
        for k in range(4, 21):
            tests = []
            if k % 2 == 0:
                tests.extend(miller_basis(k, 20 * p).forms)
            tests.extend(
                QSeries.from_coeffs([rng.randrange(-999, 999) for _ in range(20 * p)])
                for _ in range(5)
            )
            for f in tests:
                lhs = hecke_tp(f, k, p)
                rhs = up(f, k, p) + frobenius(f, p).scale(p ** (k - 1)).truncate(
                    f.qprec // p
                )
                if lhs != rhs:
                    exact = False
                    details.append(f"decomposition FAILS at (k,p)=({k},{p})")
    if exact:
        details.append("T_p = U_p + p^(k-1) F exactly over Z for k in [4,20], p in {5,7}")
    ok = ok and exact
    return CriterionResult(3, "mod-p congruences and exact decomposition", ok, details)


def criterion_4(seed: int = 0) -> CriterionResult:
    """Hida control at H^0: rank stability and ordinary containment."""
    ok = True
    details = []
    for p in (5, 7):
        for k in range(4, 18, 2):
            ranks = [ordinary_rank_mod_p(k + j * (p - 1), p) for j in range(4)]
            if len(set(ranks)) != 1:
                ok = False
                details.append(f"rank not constant at (k,p)=({k},{p}): {ranks}")
            for n in (1, 2, 3):
                report = control_check_h0(k, p, n)
                if not report.passed:
                    ok = False
                    details.append(f"containment FAILS at (k,p,n)=({k},{p},{n})")
    if ok:
        details.append("ranks constant along k..k+3(p-1), containment holds, k in [4,16]")
    for n, label in [(1, "e(U_5)M_8(F_5) in M_4(F_5)"), (2, "e(U_5)M_12(F_5) in M_4(F_5)")]:
        report = control_check_h0(4, 5, n)
        good = report.passed and report.rank_high == 1
        ok = ok and good
        details.append(f"{label}: {'ok' if good else 'FAIL'}")
    return CriterionResult(4, "Hida control at H^0", ok, details)


def criterion_5(seed: int = 0) -> CriterionResult:
    """Eisenstein family interpolation at p = 5, component 0."""
    ok = True
    details = []
    family = fit_family(5, 0, [4, 8, 12, 16], [2, 5], m=8)
    if family.rank < 1:
        ok = False
    details.append(f"rank {family.rank} constant across weights {family.sample_weights}")
    for k in family.sample_weights:
        if family.eigen_data[k][5] != (1,):
            ok = False
            details.append(f"a_5 differs from 1 at weight {k}")
        if family.eigen_data[k][2] != ((1 + 2 ** (k - 1)) % 5**8,):
            ok = False
            details.append(f"a_2 differs from 1 + 2^(k-1) at weight {k}")
    if ok:
        details.append("a_5 = 1 and a_2 = 1 + 2^(k-1) exactly at every sample weight")
    # the abstract congruence a_2(k) = a_2(k') mod 5^m when k = k' mod 4*5^(m-1)
    for m in (1, 2, 3):
        step = 4 * 5 ** (m - 1)
        for k in (4, 8, 12, 16):
            diff = (1 + 2 ** (k + step - 1)) - (1 + 2 ** (k - 1))
            if val_p(diff, 5) < m:
                ok = False
                details.append(f"congruence fails at m={m}, k={k}")
    details.append("a_2 congruences hold mod 5^m for k = k' mod 4*5^(m-1), m <= 3")
    # the fitted polynomial predicts a held-out weight to the disc distance
    fit2 = family.fitted[2][family.keys[0]]
    predicted = int(fit2.specialize(24))
    if (predicted - (1 + 2**23)) % 5**2 != 0:
        ok = False
        details.append("fitted a_2 fails the held-out weight 24")
    else:
        details.append("fitted a_2 predicts weight 24 mod 5^2")
    if not all(c["holds"] for c in family.congruence_checks):
        ok = False
        details.append("recorded interpolation congruences fail")
    return CriterionResult(5, "Eisenstein family interpolation", ok, details)


def criterion_6(seed: int = 0) -> CriterionResult:
    """Slope floors: normalized >= 0 and naive = normalized + 1 (k >= 2)."""
    ok = True
    details = []
    for (k, p), cfg in SLOPE_CONFIGS.items():
        bound = Fraction(min(cfg["m"] - 2, k))
        report = slope_spectrum(
            k, p, cfg["I"], cfg["m"], certify_below=bound, classical=False
        )
        slopes = report.slopes.slope_multiset()
        if any(s < 0 for s in slopes):
            ok = False
            details.append(f"negative normalized slope at (k,p)=({k},{p})")
        naive = report.naive_slopes.slope_multiset()
        shifted = [s + 1 for s in slopes]
        if naive[: len(shifted)] != shifted or not report.naive_shift_checked:
            ok = False
            details.append(f"naive shift fails at (k,p)=({k},{p})")
        details.append(
            f"(k,p)=({k},{p}): certified slopes {[str(s) for s in slopes]} >= 0, naive = +1"
        )
    return CriterionResult(6, "slope floors and naive shift", ok, details)


def criterion_7(seed: int = 0) -> CriterionResult:
    """Classicality below min(k-1, m-2) at (4,5) and (12,5)."""
    expected = {
        (4, 5): [Fraction(0), Fraction(1)],
        (12, 5): [Fraction(0), Fraction(1), Fraction(5), Fraction(5), Fraction(5)],
    }
    ok = True
    details = []
    for (k, p), cfg in CLASSICALITY_CONFIGS.items():
        report = classicality_check(k, p, cfg["I"], cfg["m"])
        want = expected[(k, p)]
        good = (
            report.passed
            and list(report.overconvergent) == want
            and list(report.classical) == want
        )
        ok = ok and good
        details.append(
            f"(k,p)=({k},{p}) below {report.compared_below}: overconvergent "
            f"{[str(s) for s in report.overconvergent]} vs classical "
            f"{[str(s) for s in report.classical]} -> {report.verdict}"
        )
    return CriterionResult(7, "classicality multiset equality", ok, details)


def criterion_8(seed: int = 0) -> CriterionResult:
    """Truncation stability: slopes below min(m-2, k) for (I,Q) vs (I+2, 2Q)."""
    ok = True
    details = []
    for (k, p), cfg in SLOPE_CONFIGS.items():
        bound = Fraction(min(cfg["m"] - 2, k))
        a = slope_spectrum(
            k, p, cfg["I"], cfg["m"], certify_below=bound, classical=False
        )
        b = slope_spectrum(
            k,
            p,
            cfg["I"] + 2,
            cfg["m"],
            qprec=2 * a.qprec,
            certify_below=bound,
            classical=False,
        )
        sa = a.slopes.slopes_below(bound)
        sb = b.slopes.slopes_below(bound)
        if sa != sb:
            ok = False
        details.append(
            f"(k,p)=({k},{p}) below {bound}: {[str(s) for s in sa]} "
            f"{'==' if sa == sb else '!='} {[str(s) for s in sb]}"
        )
    return CriterionResult(8, "truncation stability", ok, details)


DISC_SAMPLES = (4, 8, 12, 16, 20)
DISC_DEPTH = 10  # at the largest sample; top weight 60, D = 6


def criterion_9(seed: int = 0) -> CriterionResult:
    """Eigencurve disc: held-out specialization and flat ordinary degree."""
    from .charseries import char_series
    from .weights import w_coordinate

    p, m = 5, 10
    ok = True
    details = []
    top = max(DISC_SAMPLES) + DISC_DEPTH * (p - 1)
    for held_out in DISC_SAMPLES:
        rest = tuple(k for k in DISC_SAMPLES if k != held_out)
        depth = (top - max(rest)) // (p - 1)
        disc = WeightDisc(p, 0, min(rest), rest, len(rest) - 1, m)
        series = two_var_charseries(disc, depth)
        predicted = series.specialize(held_out)
        direct_basis = katz_basis(held_out, p, (top - held_out) // (p - 1))
        direct = char_series(up_matrix(direct_basis, m))
        e_bound = sum(
            val_p(
                (w_coordinate(held_out, p, m) - w_coordinate(k, p, m)) % p**m,
                p,
                saturate=m,
            )
            for k in rest
        )
        prec = min(e_bound, predicted.m)
        good = all(
            (int(a) - int(b)) % p**prec == 0
            for a, b in zip(predicted.coeffs, direct.coeffs)
        )
        ok = ok and good
        details.append(
            f"held-out {held_out}: all {series.degree + 1} coefficients match "
            f"mod 5^{prec}: {'ok' if good else 'FAIL'}"
        )
    full = WeightDisc(p, 0, min(DISC_SAMPLES), DISC_SAMPLES, len(DISC_SAMPLES) - 1, m)
    series = two_var_charseries(full, DISC_DEPTH)
    report = local_piece_report(series, 0)
    good = report.constant and set(report.degrees.values()) == {1}
    ok = ok and good
    details.append(
        f"slope-0 factor degree across the disc: {dict(sorted(report.degrees.items()))} "
        f"constant: {report.constant}"
    )
    return CriterionResult(9, "eigencurve disc consistency", ok, details)


THETA_CONFIGS = ((2, 5), (4, 5), (4, 7))


def criterion_10(seed: int = 0) -> CriterionResult:
    """Duality: transpose equality, rank duality, adjunction, theta probe."""
    rng = random.Random(seed)
    ok = True
    details = []
    # (a) transpose char-series equality on every configured U_p matrix
    for (k, p), cfg in SLOPE_CONFIGS.items():
        mat = up_matrix(katz_basis(k, p, cfg["I"]), cfg["m"])
        if not transpose_charseries_equal(mat):
            ok = False
            details.append(f"transpose equality FAILS at (k,p)=({k},{p})")
    details.append("char series of U_p and its transpose agree on all configured matrices")
    # (b) rank e(U_p) = rank e(F) at every weight
    for p in (5, 7):
        for k in range(4, 18, 2):
            basis = mod_p_space(k, p)
            if basis.dim == 0:
                continue
            rows = operator_matrix(basis, lambda f: hecke_tp(f, k, p))
            mat = PadicMatrix.from_rows(rows, p, 4)
            r_source = ordinary_projector(mat).rank
            r_dual = ordinary_projector(mat.transpose()).rank
            if r_source != r_dual:
                ok = False
                details.append(f"rank duality FAILS at (k,p)=({k},{p})")
    for (k, p) in ((4, 5), (12, 5)):
        cfg = SLOPE_CONFIGS[(k, p)]
        res = rank_duality_check(up_matrix(katz_basis(k, p, cfg["I"]), cfg["m"]))
        if not res["equal"]:
            ok = False
            details.append(f"Katz rank duality FAILS at (k,p)=({k},{p})")
    details.append("rank e(U_p) = rank e(F) at every configured weight")
    # (c) adjunction identity on 100 random gram/operator tuples
    good = 0
    for _ in range(100):
        n = rng.choice([2, 3])
        u = _random_matrix(rng, n, 5, 4)
        gram = _random_unimodular(rng, n, 5, 4)
        f = [rng.getrandbits(24) for _ in range(n)]
        g = [rng.getrandbits(24) for _ in range(n)]
        if adjunction_check(f, g, u, gram):
            good += 1
    if good != 100:
        ok = False
    details.append(f"adjunction <U_p f, g> = <f, F g> exact on {good}/100 random tuples")
    # (d) theta probe with negative control (shift by k must fail)
    for k, p in THETA_CONFIGS:
        probe = theta_probe(k, p, m=10)
        lifted = [c for c in probe.classes if c.present]
        kernel = [c for c in probe.classes if c.kernel_excluded]
        if not probe.passed:
            ok = False
        details.append(
            f"theta probe (k,p)=({k},{p}): {len(lifted)} classes shift by {k - 1}"
            + (f", {len(kernel)} theta-kernel class excluded" if kernel else "")
            + f"; control shift {k} fails: {not probe.control_contained}"
        )
    return CriterionResult(10, "duality", ok, details)


def run_all(seed: int = 0, numbers: Optional[Sequence[int]] = None) -> List[CriterionResult]:
    criteria: List[Callable[[int], CriterionResult]] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ]
    selected = numbers or range(1, 11)
    return [criteria[n - 1](seed) for n in selected]

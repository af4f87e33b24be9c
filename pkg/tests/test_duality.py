import random
from fractions import Fraction

import pytest

from padicforms.charseries import char_series
from padicforms.coleman import katz_basis, up_matrix
from padicforms.duality import (
    adjunction_check,
    charseries_duality_check,
    dual_module,
    rank_duality_check,
    theta_probe,
    transpose_charseries_equal,
)
from padicforms.errors import ConfigError
from padicforms.padic import PadicMatrix

from test_linalg import random_matrix, random_unimodular


def test_dual_module_rank_one():
    u = PadicMatrix.from_rows([[7]], 5, 4)
    dual = dual_module(u)
    assert dual.operator_on_dual.rows == ((7,),)
    assert dual.rank == 1


def test_dual_module_charpoly_equality():
    rng = random.Random(6)
    for _ in range(10):
        u = random_matrix(rng, 3, 5, 4)
        dual = dual_module(u)
        assert char_series(dual.operator_on_dual).coeffs == char_series(u).coeffs
    # with a nontrivial gram the dual operator is conjugate to U^T
    g = random_unimodular(rng, 3, 5, 4)
    u = random_matrix(rng, 3, 5, 4)
    dual = dual_module(u, g)
    assert char_series(dual.operator_on_dual).coeffs == char_series(u).coeffs


def test_transpose_charseries_equal():
    rng = random.Random(9)
    for _ in range(20):
        assert transpose_charseries_equal(random_matrix(rng, 3, 7, 3))


def test_adjunction_identity_and_negative_control():
    rng = random.Random(12)
    for _ in range(25):
        n = rng.choice([2, 3])
        u = random_matrix(rng, n, 5, 4)
        g = random_unimodular(rng, n, 5, 4)
        f = [rng.getrandbits(24) for _ in range(n)]
        h = [rng.getrandbits(24) for _ in range(n)]
        assert adjunction_check(f, h, u, g)
        assert adjunction_check(f, h, u)  # identity gram
        # perturbing F must break the identity for generic vectors
        f_op = dual_module(u, g).operator_on_dual
        perturbed = f_op + PadicMatrix.identity(n, 5, 4)
        assert not adjunction_check([1] * n, [1] * n, u, g, f_op=perturbed) or not adjunction_check(
            f, h, u, g, f_op=perturbed
        )


def test_rank_duality_on_ordinary_blocks():
    mat = up_matrix(katz_basis(4, 5, 8), 8)
    res = rank_duality_check(mat)
    assert res["equal"] and res["rank_source"] == 1


def test_theta_probe_weight4():
    probe = theta_probe(4, 5, m=10)
    assert probe.passed
    assert probe.shift == 3
    sources = [c.source_qslope for c in probe.classes]
    assert Fraction(0) in sources and Fraction(2) in sources
    assert not probe.control_contained
    assert not any(c.kernel_excluded for c in probe.classes)


def test_theta_probe_weight2_kernel_exclusion():
    probe = theta_probe(2, 5, m=10)
    assert probe.passed
    kernel = [c for c in probe.classes if c.kernel_excluded]
    assert len(kernel) == 1 and kernel[0].source_qslope == 0
    lifted = [c for c in probe.classes if c.present]
    assert lifted  # the non-constant classes do lift


def test_theta_probe_validation():
    with pytest.raises(ConfigError):
        theta_probe(1, 5, m=8)


def test_charseries_duality_check():
    report = charseries_duality_check(4, 5, twist_depth=8, m=10)
    assert report.structural_equal
    assert report.rank_duality["equal"]
    assert report.theta.passed
    assert report.verdict == "pass"

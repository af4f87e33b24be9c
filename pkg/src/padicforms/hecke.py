"""Hecke operators on q-expansions, with exact p-power normalizations.

Conventions (trivial nebentypus):

  T_p, weight k >= 1:   sum a_{np} q^n  +  p^(k-1) sum a_n q^(np)
  T_p, weight k <= 1:   p^(1-k) sum a_{np} q^n  +  sum a_n q^(np)
  U_p^naive:            p sum a_{np} q^n
  U_p = p^(-inf{1,k}) U_p^naive:
        sum a_{np} q^n            for k >= 1
        p^(1-k) sum a_{np} q^n    for k <= 1
  F (Frobenius):        sum a_n q^(np)       (weight independent)
  theta = q d/dq:       sum n a_n q^n

Identities, exact on q-expansions: T_p = U_p + p^(k-1) F for k >= 1,
and T_p = F + U_p for k <= 1 (the k <= 1 normalization already carries
the p^(1-k)); the two T_p branches agree at k = 1.  Applying T_p or U_p
divides the q-precision by p.
"""

from __future__ import annotations

from .errors import PrecisionError
from .padic import is_prime
from .qexp import QSeries


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def _out_prec(f: QSeries, p: int) -> int:
    q = f.qprec // p
    if q < 1:
        raise PrecisionError(f"q-precision {f.qprec} too small for level-{p} operators")
    return q


def hecke_tp(f: QSeries, k: int, p: int) -> QSeries:
    """T_p at weight k; output q-precision is floor(Q/p)."""
    _check_prime(p)
    q = _out_prec(f, p)
    a = f.coeffs
    out = []
    if k >= 1:
        pk = p ** (k - 1)
        for n in range(q):
            c = a[n * p]
            if n % p == 0:
                c += pk * a[n // p]
            out.append(c)
    else:
        pk = p ** (1 - k)
        for n in range(q):
            c = pk * a[n * p]
            if n % p == 0:
                c += a[n // p]
            out.append(c)
    return QSeries(f.ring, tuple(out))


def up_naive(f: QSeries, p: int) -> QSeries:
    """U_p^naive: p times the coefficient restriction to p-divisible indices."""
    _check_prime(p)
    q = _out_prec(f, p)
    return QSeries(f.ring, tuple(p * f.coeffs[n * p] for n in range(q)))


def up(f: QSeries, k: int, p: int) -> QSeries:
    """Normalized U_p = p^(-inf{1,k}) U_p^naive.

    For k <= 0 the normalization is a nonnegative p-power, so the result
    stays integral; no precision is lost in either branch.
    """
    _check_prime(p)
    q = _out_prec(f, p)
    factor = 1 if k >= 1 else p ** (1 - k)
    return QSeries(f.ring, tuple(factor * f.coeffs[n * p] for n in range(q)))


def frobenius(f: QSeries, p: int) -> QSeries:
    """F: q -> q^p on expansions; weight independent, precision preserving."""
    _check_prime(p)
    out = [0] * f.qprec
    for n in range(0, f.qprec, p):
        out[n] = f.coeffs[n // p]
    return QSeries(f.ring, tuple(out))


def theta(f: QSeries) -> QSeries:
    """theta = q d/dq; satisfies U_p^naive . theta = p . theta . U_p^naive."""
    return f.map_coeffs(lambda n, a: n * a)

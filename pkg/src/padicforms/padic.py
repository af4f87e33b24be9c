"""Exact scalars and dense square matrices over Z/p^m.

Everything is plain integer arithmetic reduced modulo p^m; there is no
floating point anywhere.  Valuations are saturated at the precision
exponent: ``valuation(0) = m`` means "at least m", not "equals m".

All values are immutable after construction, so they can be shared
freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _check_pm(p: int, m: int) -> None:
    if m < 1:
        raise ValueError(f"precision exponent must be >= 1, got {m}")
    if p < 3 or not is_prime(p):
        raise ValueError(f"p must be a prime >= 3, got {p}")


def val_p(x: int, p: int, saturate: Optional[int] = None) -> int:
    """p-adic valuation of an integer; ``saturate`` caps the result.

    For x = 0 the saturation cap is returned (it must be given).
    """
    if x == 0:
        if saturate is None:
            raise ValueError("valuation of 0 is infinite; pass a saturation cap")
        return saturate
    v = 0
    while x % p == 0:
        x //= p
        v += 1
        if saturate is not None and v >= saturate:
            return saturate
    return v


@dataclass(frozen=True)
class PadicScalar:
    """An element of Z/p^m, stored as its reduced residue."""

    residue: int
    p: int
    m: int

    def __post_init__(self) -> None:
        _check_pm(self.p, self.m)
        object.__setattr__(self, "residue", self.residue % self.p**self.m)

    @property
    def modulus(self) -> int:
        return self.p**self.m

    def valuation(self) -> int:
        """v_p of the residue, saturated at m (so valuation(0) = m)."""
        return val_p(self.residue, self.p, saturate=self.m)

    def is_unit(self) -> bool:
        return self.residue % self.p != 0

    def is_zero(self) -> bool:
        return self.residue == 0

    def _lift(self, other: "PadicScalar | int") -> int:
        if isinstance(other, PadicScalar):
            if (other.p, other.m) != (self.p, self.m):
                raise ValueError(
                    f"scalar mismatch: Z/{self.p}^{self.m} vs Z/{other.p}^{other.m}"
                )
            return other.residue
        return int(other)

    def __add__(self, other: "PadicScalar | int") -> "PadicScalar":
        return PadicScalar(self.residue + self._lift(other), self.p, self.m)

    def __sub__(self, other: "PadicScalar | int") -> "PadicScalar":
        return PadicScalar(self.residue - self._lift(other), self.p, self.m)

    def __mul__(self, other: "PadicScalar | int") -> "PadicScalar":
        return PadicScalar(self.residue * self._lift(other), self.p, self.m)

    def __neg__(self) -> "PadicScalar":
        return PadicScalar(-self.residue, self.p, self.m)

    def inverse(self) -> "PadicScalar":
        if not self.is_unit():
            raise ZeroDivisionError(
                f"{self.residue} is not a unit mod {self.p}^{self.m}"
            )
        return PadicScalar(pow(self.residue, -1, self.modulus), self.p, self.m)

    def exact_divide_by_p_power(self, j: int) -> "PadicScalar":
        """Divide by p^j; the result lives in Z/p^(m-j).

        This is the only precision-losing scalar operation.
        """
        from .errors import PrecisionError

        if j < 0 or j >= self.m:
            raise PrecisionError(f"cannot divide by p^{j} at precision {self.m}")
        if self.residue % self.p**j != 0:
            raise PrecisionError(
                f"{self.residue} is not divisible by {self.p}^{j} mod {self.p}^{self.m}"
            )
        return PadicScalar(self.residue // self.p**j, self.p, self.m - j)

    def reduce(self, m_new: int) -> "PadicScalar":
        if m_new > self.m:
            raise ValueError("cannot increase precision by reduction")
        return PadicScalar(self.residue, self.p, m_new)

    def __int__(self) -> int:
        return self.residue


@dataclass(frozen=True)
class PadicMatrix:
    """A square matrix over Z/p^m with an optional basis tag.

    The tag records the basis the matrix is written in; it is carried
    through arithmetic when unambiguous and dropped otherwise, and it
    never participates in numerical decisions.
    """

    rows: tuple
    p: int
    m: int
    basis_tag: Optional[str] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        _check_pm(self.p, self.m)
        n = len(self.rows)
        modulus = self.p**self.m
        reduced = tuple(tuple(int(x) % modulus for x in row) for row in self.rows)
        for row in reduced:
            if len(row) != n:
                raise ValueError("matrix must be square")
        object.__setattr__(self, "rows", reduced)

    @classmethod
    def from_rows(
        cls,
        rows: Iterable[Sequence[int]],
        p: int,
        m: int,
        basis_tag: Optional[str] = None,
    ) -> "PadicMatrix":
        return cls(tuple(tuple(r) for r in rows), p, m, basis_tag)

    @classmethod
    def identity(cls, n: int, p: int, m: int) -> "PadicMatrix":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)), p, m)

    @classmethod
    def zero(cls, n: int, p: int, m: int) -> "PadicMatrix":
        return cls(tuple(tuple(0 for _ in range(n)) for _ in range(n)), p, m)

    @property
    def size(self) -> int:
        return len(self.rows)

    @property
    def modulus(self) -> int:
        return self.p**self.m

    def entry(self, i: int, j: int) -> PadicScalar:
        return PadicScalar(self.rows[i][j], self.p, self.m)

    def _check_compatible(self, other: "PadicMatrix") -> None:
        if (other.p, other.m) != (self.p, self.m):
            raise ValueError("matrices live over different rings")
        if other.size != self.size:
            raise ValueError("matrix size mismatch")

    def _merged_tag(self, other: "PadicMatrix") -> Optional[str]:
        return self.basis_tag if self.basis_tag == other.basis_tag else None

    def __add__(self, other: "PadicMatrix") -> "PadicMatrix":
        self._check_compatible(other)
        return PadicMatrix(
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.rows, other.rows)
            ),
            self.p,
            self.m,
            self._merged_tag(other),
        )

    def __sub__(self, other: "PadicMatrix") -> "PadicMatrix":
        self._check_compatible(other)
        return PadicMatrix(
            tuple(
                tuple(a - b for a, b in zip(ra, rb))
                for ra, rb in zip(self.rows, other.rows)
            ),
            self.p,
            self.m,
            self._merged_tag(other),
        )

    def __neg__(self) -> "PadicMatrix":
        return PadicMatrix(
            tuple(tuple(-a for a in row) for row in self.rows),
            self.p,
            self.m,
            self.basis_tag,
        )

    def scale(self, c: int) -> "PadicMatrix":
        return PadicMatrix(
            tuple(tuple(c * a for a in row) for row in self.rows),
            self.p,
            self.m,
            self.basis_tag,
        )

    def __matmul__(self, other: "PadicMatrix") -> "PadicMatrix":
        self._check_compatible(other)
        n = self.size
        modulus = self.modulus
        cols = tuple(tuple(other.rows[k][j] for k in range(n)) for j in range(n))
        out = tuple(
            tuple(sum(a * b for a, b in zip(row, col)) % modulus for col in cols)
            for row in self.rows
        )
        return PadicMatrix(out, self.p, self.m, self._merged_tag(other))

    def __pow__(self, n: int) -> "PadicMatrix":
        if n < 0:
            raise ValueError("negative matrix powers are not supported")
        result = PadicMatrix.identity(self.size, self.p, self.m)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        if self.basis_tag is not None:
            result = PadicMatrix(result.rows, self.p, self.m, self.basis_tag)
        return result

    def apply(self, vector: Sequence[int]) -> tuple:
        """Matrix times column vector, as a tuple of reduced residues."""
        if len(vector) != self.size:
            raise ValueError("vector length mismatch")
        modulus = self.modulus
        return tuple(
            sum(a * int(b) for a, b in zip(row, vector)) % modulus for row in self.rows
        )

    def transpose(self) -> "PadicMatrix":
        n = self.size
        return PadicMatrix(
            tuple(tuple(self.rows[j][i] for j in range(n)) for i in range(n)),
            self.p,
            self.m,
            self.basis_tag,
        )

    def trace(self) -> PadicScalar:
        return PadicScalar(
            sum(self.rows[i][i] for i in range(self.size)), self.p, self.m
        )

    def reduce(self, m_new: int) -> "PadicMatrix":
        if m_new > self.m:
            raise ValueError("cannot increase precision by reduction")
        return PadicMatrix(self.rows, self.p, m_new, self.basis_tag)

    def is_zero(self) -> bool:
        return all(a == 0 for row in self.rows for a in row)

    def min_valuation(self) -> int:
        """Smallest entry valuation (m for the zero matrix)."""
        v = self.m
        for row in self.rows:
            for a in row:
                v = min(v, val_p(a, self.p, saturate=self.m))
        return v

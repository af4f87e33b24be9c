"""Truncated q-expansions with an exact coefficient ring tag.

A ``QSeries`` holds coefficients a_0, ..., a_{Q-1} of a formal series
sum a_n q^n, either over Z or over Z/p^m.  Arithmetic requires equal
ring tags; the q-precision of a result is the minimum of the inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Union

from .errors import PrecisionError
from .padic import _check_pm


@dataclass(frozen=True)
class IntegerRing:
    """The exact integers; the tag for classical integral q-expansions."""

    def reduce(self, x: int) -> int:
        return int(x)

    def __str__(self) -> str:
        return "Z"


@dataclass(frozen=True)
class ModRing:
    """The ring Z/p^m."""

    p: int
    m: int

    def __post_init__(self) -> None:
        _check_pm(self.p, self.m)

    @property
    def modulus(self) -> int:
        return self.p**self.m

    def reduce(self, x: int) -> int:
        return int(x) % self.modulus

    def __str__(self) -> str:
        return f"Z/{self.p}^{self.m}"


ZZ = IntegerRing()

Ring = Union[IntegerRing, ModRing]


@dataclass(frozen=True)
class QSeries:
    """A q-expansion known through q^(qprec-1)."""

    ring: Ring
    coeffs: tuple

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "coeffs", tuple(self.ring.reduce(c) for c in self.coeffs)
        )
        if not self.coeffs:
            raise ValueError("a q-expansion needs at least the constant term")

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[int], ring: Ring = ZZ) -> "QSeries":
        return cls(ring, tuple(coeffs))

    @classmethod
    def constant(cls, value: int, qprec: int, ring: Ring = ZZ) -> "QSeries":
        return cls(ring, (value,) + (0,) * (qprec - 1))

    @property
    def qprec(self) -> int:
        return len(self.coeffs)

    def coefficient(self, n: int) -> int:
        if n >= self.qprec:
            raise PrecisionError(f"coefficient a_{n} beyond q-precision {self.qprec}")
        return self.coeffs[n]

    def _common(self, other: "QSeries") -> int:
        if self.ring != other.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
        return min(self.qprec, other.qprec)

    def __add__(self, other: "QSeries") -> "QSeries":
        q = self._common(other)
        return QSeries(self.ring, tuple(a + b for a, b in zip(self.coeffs[:q], other.coeffs[:q])))

    def __sub__(self, other: "QSeries") -> "QSeries":
        q = self._common(other)
        return QSeries(self.ring, tuple(a - b for a, b in zip(self.coeffs[:q], other.coeffs[:q])))

    def __neg__(self) -> "QSeries":
        return QSeries(self.ring, tuple(-a for a in self.coeffs))

    def scale(self, c: int) -> "QSeries":
        return QSeries(self.ring, tuple(c * a for a in self.coeffs))

    def __mul__(self, other: "QSeries") -> "QSeries":
        q = self._common(other)
        a, b = self.coeffs, other.coeffs
        red = self.ring.reduce
        out = [0] * q
        for i in range(q):
            ai = a[i]
            if ai == 0:
                continue
            for j in range(q - i):
                out[i + j] += ai * b[j]
        return QSeries(self.ring, tuple(red(x) for x in out))

    def __pow__(self, n: int) -> "QSeries":
        if n < 0:
            return self.inverse() ** (-n)
        result = QSeries.constant(1, self.qprec, self.ring)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "QSeries":
        """Multiplicative inverse; the constant term must be a unit."""
        a = self.coeffs
        if isinstance(self.ring, ModRing):
            if a[0] % self.ring.p == 0:
                raise ZeroDivisionError("constant term is not a unit")
            inv0 = pow(a[0], -1, self.ring.modulus)
        else:
            if a[0] not in (1, -1):
                raise ZeroDivisionError("constant term is not a unit in Z")
            inv0 = a[0]
        red = self.ring.reduce
        out = [0] * self.qprec
        out[0] = red(inv0)
        for n in range(1, self.qprec):
            s = sum(a[i] * out[n - i] for i in range(1, n + 1))
            out[n] = red(-inv0 * s)
        return QSeries(self.ring, tuple(out))

    def truncate(self, qprec: int) -> "QSeries":
        if qprec > self.qprec:
            raise PrecisionError(
                f"cannot extend q-precision {self.qprec} to {qprec}"
            )
        return QSeries(self.ring, self.coeffs[:qprec])

    def shift_q(self, t: int) -> "QSeries":
        """Multiply by q^t; a series exact to Q is exact to Q+t after."""
        if t < 0:
            raise ValueError("negative q-shifts are not supported")
        return QSeries(self.ring, (0,) * t + self.coeffs)

    def map_coeffs(self, fn: Callable[[int, int], int]) -> "QSeries":
        """New series with coefficients fn(n, a_n), same ring and precision."""
        return QSeries(self.ring, tuple(fn(n, a) for n, a in enumerate(self.coeffs)))

    def to_ring(self, ring: Ring) -> "QSeries":
        """Reduce into a smaller ring (Z -> Z/p^m, or lower m)."""
        if isinstance(ring, ModRing) and isinstance(self.ring, ModRing):
            if ring.p != self.ring.p or ring.m > self.ring.m:
                raise ValueError(f"cannot reduce {self.ring} to {ring}")
        elif isinstance(ring, IntegerRing) and not isinstance(self.ring, IntegerRing):
            raise ValueError("cannot lift a modular series to Z")
        return QSeries(ring, self.coeffs)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def leading_index(self):
        """Index of the first nonzero coefficient, or None."""
        for n, c in enumerate(self.coeffs):
            if c != 0:
                return n
        return None

"""Exact q-combinatorics and arithmetic in the quadratic field Q(sqrt(q)).

Everything here is exact: rationals are :class:`fractions.Fraction` and
elements of Q(sqrt(q)) are :class:`ExactScalar` pairs ``a + b*sqrt(q)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

Rational = Fraction
Number = Union[int, Fraction, "ExactScalar"]


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def q_int(n: int, q: int) -> Fraction:
    """Return the q-integer ``[n]_q = (q**n - 1) / (q - 1)``."""
    if n < 0:
        raise ValueError(f"q_int needs n >= 0, got {n}")
    return Fraction(q**n - 1, q - 1)


def q_factorial(n: int, q: int) -> Fraction:
    out = Fraction(1)
    for k in range(1, n + 1):
        out *= q_int(k, q)
    return out


@lru_cache(maxsize=4096)
def q_binomial(n: int, i: int, q: int) -> Fraction:
    """Gaussian binomial coefficient; zero when ``i < 0`` or ``i > n``."""
    if i < 0 or i > n or n < 0:
        return Fraction(0)
    return q_factorial(n, q) / (q_factorial(i, q) * q_factorial(n - i, q))


def mu(r: int, N: int, M: int, q: int) -> Fraction:
    """Multiplicity prefactor ``binom(N,r) binom(M,r) prod_{k<r} (q^r - q^k)``.

    Total on the integers: vanishes for ``r < 0`` and for ``r > min(N, M)``.
    """
    if r < 0:
        return Fraction(0)
    prod = 1
    for k in range(r):
        prod *= q**r - q**k
    return q_binomial(N, r, q) * q_binomial(M, r, q) * prod


@dataclass(frozen=True, eq=False)
class ExactScalar:
    """The number ``a + b*sqrt(q)`` with rational ``a`` and ``b``.

    For a perfect-square ``q`` the irrational part is folded into ``a`` so
    that ``b == 0`` and equality stays structural.
    """

    a: Fraction
    b: Fraction
    q: int

    def __post_init__(self) -> None:
        if self.q < 2:
            raise ValueError(f"base must be >= 2, got {self.q}")
        a, b = Fraction(self.a), Fraction(self.b)
        if b and _is_square(self.q):
            a, b = a + b * math.isqrt(self.q), Fraction(0)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def of(cls, x: Number, q: int) -> ExactScalar:
        if isinstance(x, ExactScalar):
            if x.q != q:
                raise ValueError(f"base mismatch: {x.q} vs {q}")
            return x
        return cls(Fraction(x), Fraction(0), q)

    @classmethod
    def sqrt_q(cls, q: int) -> ExactScalar:
        return cls(Fraction(0), Fraction(1), q)

    @classmethod
    def sqrt_q_power(cls, q: int, k: int) -> ExactScalar:
        """``sqrt(q)**k`` for any integer ``k``."""
        half, odd = divmod(k, 2)
        c = Fraction(q) ** half
        return cls(Fraction(0), c, q) if odd else cls(c, Fraction(0), q)

    def _coerce(self, other: object) -> ExactScalar | None:
        if isinstance(other, ExactScalar):
            if other.q != self.q:
                raise ValueError(f"base mismatch: {self.q} vs {other.q}")
            return other
        if isinstance(other, (int, Fraction)):
            return ExactScalar(Fraction(other), Fraction(0), self.q)
        return None

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def conjugate(self) -> ExactScalar:
        return ExactScalar(self.a, -self.b, self.q)

    def norm(self) -> Fraction:
        """Field norm ``a**2 - q*b**2``."""
        return self.a * self.a - self.q * self.b * self.b

    def __add__(self, other: object) -> ExactScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExactScalar(self.a + o.a, self.b + o.b, self.q)

    __radd__ = __add__

    def __neg__(self) -> ExactScalar:
        return ExactScalar(-self.a, -self.b, self.q)

    def __sub__(self, other: object) -> ExactScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExactScalar(self.a - o.a, self.b - o.b, self.q)

    def __rsub__(self, other: object) -> ExactScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: object) -> ExactScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ext_mul(self, o)

    __rmul__ = __mul__

    def inverse(self) -> ExactScalar:
        return ext_inv(self)

    def __truediv__(self, other: object) -> ExactScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ext_mul(self, ext_inv(o))

    def __rtruediv__(self, other: object) -> ExactScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ext_mul(o, ext_inv(self))

    def __pow__(self, k: int) -> ExactScalar:
        if k < 0:
            return ext_inv(self) ** (-k)
        out = ExactScalar(Fraction(1), Fraction(0), self.q)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ExactScalar):
            return self.q == other.q and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.q))

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.q)

    def __repr__(self) -> str:
        return f"ExactScalar({self.a}, {self.b}, q={self.q})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        rad = f"sqrt({self.q})"
        if self.b == 1:
            irr = rad
        elif self.b == -1:
            irr = f"-{rad}"
        else:
            irr = f"{self.b}*{rad}"
        if self.a == 0:
            return irr
        if irr.startswith("-"):
            return f"{self.a} - {irr[1:]}"
        return f"{self.a} + {irr}"

    def to_json(self) -> dict[str, str]:
        return {"a": str(self.a), "b": str(self.b)}

    @classmethod
    def from_json(cls, doc: dict[str, str], q: int) -> ExactScalar:
        return cls(Fraction(doc["a"]), Fraction(doc["b"]), q)


def ext_mul(x: ExactScalar, y: ExactScalar) -> ExactScalar:
    if x.q != y.q:
        raise ValueError(f"base mismatch: {x.q} vs {y.q}")
    return ExactScalar(x.a * y.a + x.q * x.b * y.b, x.a * y.b + x.b * y.a, x.q)


def ext_inv(x: ExactScalar) -> ExactScalar:
    n = x.norm()
    if n == 0:
        if x.a != 0 or x.b != 0:
            # only reachable if sqrt(q) were rational, which normalization rules out
            raise ArithmeticError(f"nonzero element with zero norm: {x!r}")
        raise ZeroDivisionError("inverse of zero in Q(sqrt(q))")
    return ExactScalar(x.a / n, -x.b / n, x.q)

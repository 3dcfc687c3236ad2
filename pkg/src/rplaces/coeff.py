"""Exact arithmetic in Q and in real quadratic extensions Q(sqrt(d)).

All comparisons are decided with rational arithmetic only; sqrt(d) always
denotes the positive real root, so the induced order is the one inherited
from the reals.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Union

RatLike = Union[int, Fraction, "QuadExt"]


def _is_squarefree(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


class QuadExt:
    """A real number a + b*sqrt(d) with a, b rational.

    d is either None (plain rational, b must be 0) or a squarefree integer
    >= 2 shared by every value it is combined with.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a: RatLike, b: RatLike = 0, d: Optional[int] = None):
        if isinstance(a, QuadExt) or isinstance(b, QuadExt):
            raise TypeError("components must be rational")
        a = Fraction(a)
        b = Fraction(b)
        if b == 0:
            d = None
        else:
            if d is None:
                raise ValueError("irrational part requires a radicand")
            if not _is_squarefree(d):
                raise ValueError(f"radicand must be squarefree >= 2, got {d}")
        self.a = a
        self.b = b
        self.d = d

    # -- construction helpers -------------------------------------------------

    @staticmethod
    def of(value: RatLike, d: Optional[int] = None) -> "QuadExt":
        if isinstance(value, QuadExt):
            return value
        return QuadExt(value)

    @staticmethod
    def sqrt(d: int) -> "QuadExt":
        return QuadExt(0, 1, d)

    def _join_radicand(self, other: "QuadExt") -> Optional[int]:
        if self.d is None:
            return other.d
        if other.d is None or other.d == self.d:
            return self.d
        raise ValueError(f"mixed radicands {self.d} and {other.d}")

    # -- ring operations ------------------------------------------------------

    def __add__(self, other: RatLike) -> "QuadExt":
        other = QuadExt.of(other)
        d = self._join_radicand(other)
        return QuadExt(self.a + other.a, self.b + other.b, d)

    __radd__ = __add__

    def __neg__(self) -> "QuadExt":
        return QuadExt(-self.a, -self.b, self.d)

    def __sub__(self, other: RatLike) -> "QuadExt":
        return self + (-QuadExt.of(other))

    def __rsub__(self, other: RatLike) -> "QuadExt":
        return QuadExt.of(other) + (-self)

    def __mul__(self, other: RatLike) -> "QuadExt":
        other = QuadExt.of(other)
        d = self._join_radicand(other)
        dd = 0 if d is None else d
        return QuadExt(
            self.a * other.a + self.b * other.b * dd,
            self.a * other.b + self.b * other.a,
            d,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        """Field norm a^2 - d*b^2; nonzero whenever the value is nonzero."""
        dd = 0 if self.d is None else self.d
        return self.a * self.a - dd * self.b * self.b

    def inverse(self) -> "QuadExt":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        n = self.norm()
        return QuadExt(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other: RatLike) -> "QuadExt":
        return self * QuadExt.of(other).inverse()

    def __rtruediv__(self, other: RatLike) -> "QuadExt":
        return QuadExt.of(other) * self.inverse()

    def __pow__(self, n: int) -> "QuadExt":
        if n < 0:
            return self.inverse() ** (-n)
        out = QuadExt(1)
        base = self
        while n > 0:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- order ----------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def sign(self) -> int:
        """Exact sign, decided by rational arithmetic.

        When a and b disagree in sign the comparison a + b*sqrt(d) <> 0 is
        squared: the sign is that of a^2 - b^2 d carried by the dominant part.
        Squarefreeness rules out a^2 == b^2 d for b != 0.
        """
        if self.b == 0:
            return (self.a > 0) - (self.a < 0)
        if self.a == 0:
            return (self.b > 0) - (self.b < 0)
        sa = 1 if self.a > 0 else -1
        sb = 1 if self.b > 0 else -1
        if sa == sb:
            return sa
        n = self.norm()  # a^2 - d b^2
        if n == 0:
            raise ArithmeticError("squarefree radicand cannot have zero norm")
        return sa if n > 0 else sb

    def cmp(self, other: RatLike) -> int:
        return (self - QuadExt.of(other)).sign()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, (int, Fraction, QuadExt)):
            return NotImplemented
        return self.cmp(other) == 0

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __lt__(self, other: RatLike) -> bool:
        return self.cmp(other) < 0

    def __le__(self, other: RatLike) -> bool:
        return self.cmp(other) <= 0

    def __gt__(self, other: RatLike) -> bool:
        return self.cmp(other) > 0

    def __ge__(self, other: RatLike) -> bool:
        return self.cmp(other) >= 0

    def __abs__(self) -> "QuadExt":
        return -self if self.sign() < 0 else self

    # -- structure ------------------------------------------------------------

    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if self.b != 0:
            raise ValueError("value is irrational")
        return self.a

    def floor(self) -> int:
        """Exact integer floor."""
        if self.b == 0:
            return math.floor(self.a)
        # floor(b*sqrt(d)) via isqrt on b^2 d scaled to an integer.
        num = self.b.numerator * self.b.numerator * self.d
        den = self.b.denominator * self.b.denominator
        root = math.isqrt(num * den) // den  # floor of |b| sqrt(d)
        irr = root if self.b > 0 else -root - 1
        n = math.floor(self.a) + irr
        while QuadExt(n + 1) <= self:
            n += 1
        while QuadExt(n) > self:
            n -= 1
        return n

    def __repr__(self) -> str:
        return f"QuadExt({self.a!r}, {self.b!r}, {self.d!r})"

    def __str__(self) -> str:
        return format_coeff(self)


def format_coeff(x: QuadExt) -> str:
    """Canonical text form, e.g. '3/2', 'sqrt(2)', '1-2*sqrt(5)'."""
    if x.b == 0:
        return str(x.a)
    if x.b == 1:
        s = f"sqrt({x.d})"
    elif x.b == -1:
        s = f"-sqrt({x.d})"
    else:
        s = f"{x.b}*sqrt({x.d})"
    if x.a == 0:
        return s
    if s.startswith("-"):
        return f"{x.a}{s}"
    return f"{x.a}+{s}"


def rational_between(lo: QuadExt, hi: QuadExt) -> Fraction:
    """A rational strictly between lo < hi, found by dyadic refinement."""
    if lo.cmp(hi) >= 0:
        raise ValueError("empty interval")
    scale = 1
    while True:
        n = (lo * scale).floor() + 1
        q = Fraction(n, scale)
        if lo < q < hi:
            return q
        scale *= 2


def rational_below(x: QuadExt) -> Fraction:
    """A positive rational strictly below x > 0."""
    if x.sign() <= 0:
        raise ValueError("need a positive value")
    return rational_between(QuadExt(0), x)

"""Exact numbers in the quadratic field Q(sqrt2)."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

SQRT2_FLOAT = math.sqrt(2.0)


class NotASquare(ArithmeticError):
    """Raised when an exact square root does not exist in Q(sqrt2)."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {x!r} to a rational")


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


class AlgNum:
    """The number ``a + b*sqrt2`` with rational ``a`` and ``b``.

    Instances are immutable and hashable; ints and Fractions mix freely.
    """

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        object.__setattr__(self, "a", _frac(a))
        object.__setattr__(self, "b", _frac(b))

    def __setattr__(self, name, value):
        raise AttributeError("AlgNum is immutable")

    @classmethod
    def coerce(cls, x) -> AlgNum:
        if isinstance(x, AlgNum):
            return x
        return cls(x, 0)

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def __bool__(self):
        return not self.is_zero()

    def sign(self) -> int:
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        if (a > 0) == (b > 0):
            return 1 if a > 0 else -1
        # opposite signs: compare a^2 with 2 b^2
        if a * a > 2 * b * b:
            return 1 if a > 0 else -1
        return 1 if b > 0 else -1

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, AlgNum):
            try:
                other = AlgNum.coerce(other)
            except TypeError:
                return NotImplemented
        return AlgNum(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return AlgNum(-self.a, -self.b)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, AlgNum):
            try:
                other = AlgNum.coerce(other)
            except TypeError:
                return NotImplemented
        return AlgNum(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return AlgNum.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, AlgNum):
            try:
                other = AlgNum.coerce(other)
            except TypeError:
                return NotImplemented
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        return AlgNum(a1 * a2 + 2 * b1 * b2, a1 * b2 + a2 * b1)

    __rmul__ = __mul__

    def conjugate(self) -> AlgNum:
        return AlgNum(self.a, -self.b)

    def norm(self) -> Fraction:
        """Field norm ``a^2 - 2 b^2``; zero only for zero."""
        return self.a * self.a - 2 * self.b * self.b

    def inverse(self) -> AlgNum:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt2)")
        return AlgNum(self.a / n, -self.b / n)

    def __truediv__(self, other):
        if not isinstance(other, AlgNum):
            try:
                other = AlgNum.coerce(other)
            except TypeError:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return AlgNum.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = AlgNum(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def sqrt(self) -> AlgNum:
        """Exact square root in Q(sqrt2), or raise :class:`NotASquare`.

        The root returned is the positive one.
        """
        if self.sign() < 0:
            raise NotASquare(f"{self} is negative")
        if self.is_zero():
            return AlgNum(0)
        a, b = self.a, self.b
        candidates = []
        if b == 0:
            r = _rational_sqrt(a)
            if r is not None:
                candidates.append(AlgNum(r, 0))
            r = _rational_sqrt(a / 2)
            if r is not None:
                candidates.append(AlgNum(0, r))
        else:
            # (p + q sqrt2)^2 = a + b sqrt2  <=>  p^2 + 2q^2 = a, 2pq = b
            d = _rational_sqrt(a * a - 2 * b * b)
            if d is not None:
                for p2 in ((a + d) / 2, (a - d) / 2):
                    p = _rational_sqrt(p2)
                    if p:
                        candidates.append(AlgNum(p, b / (2 * p)))
        for c in candidates:
            if c.sign() < 0:
                c = -c
            if c * c == self:
                return c
        raise NotASquare(f"{self} has no square root in Q(sqrt2)")

    # -- comparisons / conversion ------------------------------------------
    def __eq__(self, other):
        if isinstance(other, AlgNum):
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Rational)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self):
        return float(self.a) + float(self.b) * SQRT2_FLOAT

    def __repr__(self):
        return f"AlgNum({self.a}, {self.b})"

    def __str__(self):
        return format_algnum(self)


SQRT2 = AlgNum(0, 1)
ZERO = AlgNum(0)
ONE = AlgNum(1)


def format_algnum(x: AlgNum) -> str:
    """Render in the scalar grammar, e.g. ``3/2``, ``-sqrt2``, ``(1 + 2*sqrt2)``."""
    a, b = x.a, x.b
    if b == 0:
        return str(a)
    if b == 1:
        bpart = "sqrt2"
    elif b == -1:
        bpart = "-sqrt2"
    else:
        bpart = f"{b}*sqrt2"
    if a == 0:
        return bpart
    if bpart.startswith("-"):
        return f"({a} - {bpart[1:]})"
    return f"({a} + {bpart})"

"""
Exact arithmetic in Q[sqrt(d)] for a fixed positive rational d.

Every quantity of the tensor-product certificate (alpha, beta, the epsilons,
eta and the block entries) is of the form a + b*sqrt(p1*p2), so this is the
only number type the certificate module needs besides Fraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from math import isqrt
from typing import Optional, Union

from core.exceptions import ValidationError

Number = Union[int, Fraction, "ExactSurd"]


def rational_sqrt(value: Fraction) -> Optional[Fraction]:
    """sqrt(value) if it is rational, else None."""
    value = Fraction(value)
    if value < 0:
        return None
    num, den = isqrt(value.numerator), isqrt(value.denominator)
    if num * num == value.numerator and den * den == value.denominator:
        return Fraction(num, den)
    return None


def _frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


@total_ordering
@dataclass(frozen=True)
class ExactSurd:
    """a + b*sqrt(d) with a, b, d rational and d > 0."""

    a: Fraction
    b: Fraction
    d: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", _frac(self.a))
        object.__setattr__(self, "b", _frac(self.b))
        object.__setattr__(self, "d", _frac(self.d))
        if self.d <= 0:
            raise ValidationError(f"surd radicand must be positive, got {self.d}")

    # ---- construction -------------------------------------------------

    @classmethod
    def rational(cls, value, d: Fraction) -> "ExactSurd":
        return cls(_frac(value), Fraction(0), d)

    @classmethod
    def root(cls, d: Fraction, coefficient=1) -> "ExactSurd":
        """coefficient * sqrt(d)"""
        return cls(Fraction(0), _frac(coefficient), d)

    def _align(self, other) -> tuple["ExactSurd", "ExactSurd"]:
        """Both operands over one radicand; a rational side adopts the other side's d."""
        if not isinstance(other, ExactSurd):
            return self, ExactSurd(_frac(other), Fraction(0), self.d)
        if other.d == self.d:
            return self, other
        if other.b == 0:
            return self, ExactSurd(other.a, Fraction(0), self.d)
        if self.b == 0:
            return ExactSurd(self.a, Fraction(0), other.d), other
        raise ValidationError(f"cannot mix sqrt({self.d}) with sqrt({other.d})")

    def _coerce(self, other) -> "ExactSurd":
        return self._align(other)[1]

    # ---- arithmetic ---------------------------------------------------

    def __add__(self, other) -> "ExactSurd":
        s, o = self._align(other)
        return ExactSurd(s.a + o.a, s.b + o.b, s.d)

    __radd__ = __add__

    def __neg__(self) -> "ExactSurd":
        return ExactSurd(-self.a, -self.b, self.d)

    def __sub__(self, other) -> "ExactSurd":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "ExactSurd":
        return self._coerce(other) - self

    def __mul__(self, other) -> "ExactSurd":
        s, o = self._align(other)
        return ExactSurd(
            s.a * o.a + s.b * o.b * s.d,
            s.a * o.b + s.b * o.a,
            s.d,
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ExactSurd":
        s, o = self._align(other)
        # (a + b r) / (c + e r) = (a + b r)(c - e r) / (c^2 - e^2 d)
        norm = o.a * o.a - o.b * o.b * s.d
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q[sqrt(d)]")
        num = s * ExactSurd(o.a, -o.b, s.d)
        return ExactSurd(num.a / norm, num.b / norm, s.d)

    def square(self) -> "ExactSurd":
        return self * self

    # ---- exact sign and ordering --------------------------------------

    def sign(self) -> int:
        """Sign of a + b*sqrt(d), decided without approximation."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 d
        lhs = self.a * self.a
        rhs = self.b * self.b * self.d
        if lhs == rhs:
            return 0
        return sa if lhs > rhs else sb

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, ExactSurd)):
            try:
                return (self - other).sign() == 0
            except ValidationError:
                return False
        return NotImplemented

    def __lt__(self, other) -> bool:
        return (self - other).sign() < 0

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    # ---- conversion ---------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def to_fraction(self) -> Fraction:
        if self.b != 0:
            raise ValidationError(f"{self} is not rational")
        return self.a

    def exact_value(self) -> Optional[Fraction]:
        """The value as a Fraction when sqrt(d) happens to be rational, else None."""
        if self.b == 0:
            return self.a
        root = rational_sqrt(self.d)
        if root is None:
            return None
        return self.a + self.b * root

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * float(self.d) ** 0.5

    def __str__(self) -> str:
        return f"{self.a} + {self.b}*sqrt(p1p2)"

    def __repr__(self) -> str:
        return f"ExactSurd({self.a} + {self.b}*sqrt({self.d}))"

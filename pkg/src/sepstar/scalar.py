"""Exact Gaussian rationals: complex numbers with rational real and imaginary parts."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

from .errors import DivisionByZero

_ZERO = mpq(0)


def to_mpq(value) -> mpq:
    """Coerce an int, Fraction, mpq or ``"p/q"`` string to an exact mpq."""
    if isinstance(value, str):
        text = value.strip()
        try:
            return mpq(Fraction(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not an exact fraction: {value!r}") from exc
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (int, Rational)) or type(value).__name__ == "mpq":
        return mpq(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def fraction_str(q: mpq) -> str:
    """Render as ``p`` or ``p/q`` in lowest terms."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class Scalar:
    """Element of Q(i), immutable. ``Scalar(re, im)``.

    Arithmetic accepts plain ints and Fractions on either side. gmpy2 keeps
    both parts reduced with a positive denominator.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", re if type(re) is type(_ZERO) else to_mpq(re))
        object.__setattr__(self, "im", im if type(im) is type(_ZERO) else to_mpq(im))

    @classmethod
    def _raw(cls, re: mpq, im: mpq) -> "Scalar":
        s = object.__new__(cls)
        object.__setattr__(s, "re", re)
        object.__setattr__(s, "im", im)
        return s

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @staticmethod
    def coerce(value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, complex):
            raise TypeError("floating-point complex values are not exact")
        return Scalar(value)

    def __add__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except TypeError:
                return NotImplemented
        return Scalar._raw(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(-self.re, -self.im)

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except TypeError:
                return NotImplemented
        return Scalar._raw(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except TypeError:
                return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return Scalar._raw(a * c, _ZERO)
        return Scalar._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self:
            raise DivisionByZero("inverse of zero scalar")
        if not self.im:
            return Scalar._raw(1 / self.re, _ZERO)
        n = self.re * self.re + self.im * self.im
        return Scalar._raw(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except TypeError:
                return NotImplemented
        if not other:
            raise DivisionByZero("division by zero scalar")
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Scalar.coerce(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = Scalar._raw(mpq(1), _ZERO), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "Scalar":
        return Scalar._raw(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except TypeError:
                return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def to_json(self) -> dict:
        return {"re": fraction_str(self.re), "im": fraction_str(self.im)}

    def __str__(self):
        if not self.im:
            return fraction_str(self.re)
        if not self.re:
            return f"{fraction_str(self.im)}*i"
        sign = "-" if self.im < 0 else "+"
        return f"({fraction_str(self.re)} {sign} {fraction_str(abs(self.im))}*i)"

    def __repr__(self):
        return f"Scalar({fraction_str(self.re)!r}, {fraction_str(self.im)!r})"


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)


def scalar_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    """Dispatch ``add``/``sub``/``mul``/``div`` on two scalars."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown scalar operation {op!r}")

"""Exact scalars: rationals (``fractions.Fraction``) and Gaussian rationals."""

from __future__ import annotations

import re
from fractions import Fraction

__all__ = ["Fraction", "Gauss", "I", "as_scalar", "parse_rational", "format_scalar", "is_real"]

_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


class Gauss:
    """An element ``re + im*i`` of Q(i), both parts held as reduced fractions."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @staticmethod
    def _coerce(other):
        if isinstance(other, Gauss):
            return other
        if isinstance(other, (int, Fraction)):
            return Gauss(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Gauss(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Gauss(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Gauss(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Gauss(self.re * other, self.im * other)
        if not isinstance(other, Gauss):
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        return Gauss(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Gauss(self.re / other, self.im / other)
        if not isinstance(other, Gauss):
            return NotImplemented
        n = other.re * other.re + other.im * other.im
        if not n:
            raise ZeroDivisionError("Gauss division by zero")
        a, b, c, d = self.re, self.im, other.re, other.im
        return Gauss((a * c + b * d) / n, (b * c - a * d) / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return Gauss(-self.re, -self.im)

    def __pos__(self):
        return self

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def conjugate(self):
        return Gauss(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __repr__(self):
        return f"Gauss({format_scalar(self.re)}, {format_scalar(self.im)})"

    def __str__(self):
        return format_scalar(self)


I = Gauss(0, 1)


def as_scalar(x):
    """Coerce ints and fractions to ``Fraction``; leave ``Gauss`` alone."""
    if isinstance(x, Gauss):
        return x
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def is_real(x) -> bool:
    return not isinstance(x, Gauss) or not x.im


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``. Raises ``ValueError`` on anything else, including ``q == 0``."""
    m = _RATIONAL.match(text) if isinstance(text, str) else None
    if m is None:
        raise ValueError(f"malformed rational {text!r}")
    num, den = m.group(1), m.group(2)
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_scalar(x) -> str:
    if isinstance(x, Gauss):
        if not x.im:
            return format_scalar(x.re)
        if not x.re:
            return f"{format_scalar(x.im)}i"
        sign = "+" if x.im > 0 else "-"
        return f"{format_scalar(x.re)}{sign}{format_scalar(abs(x.im))}i"
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"

"""Exact scalars: rationals (gmpy2.mpq) and Gaussian rationals.

Every value that flows through the linear algebra is one of

* ``mpq`` -- an exact rational,
* :class:`GaussQ` -- ``re + i*im`` with both parts ``mpq``,
* a sympy ``FracElement`` (rational function, see :mod:`gck.ratfun`).

The linear algebra only needs ``+ - * /``, equality with ``0`` and ``bool``,
so the three kinds share one code path.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

__all__ = ["mpq", "GaussQ", "I", "as_scalar", "conj", "canon", "is_real", "real_part", "imag_part", "parse_rational"]


class GaussQ:
    """A Gaussian rational ``re + i*im``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is type(_ZERO) else mpq(re)
        self.im = im if type(im) is type(_ZERO) else mpq(im)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, GaussQ):
            return GaussQ(self.re + other.re, self.im + other.im)
        if _is_rational(other):
            return GaussQ(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussQ):
            return GaussQ(self.re - other.re, self.im - other.im)
        if _is_rational(other):
            return GaussQ(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if _is_rational(other):
            return GaussQ(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussQ):
            a, b, c, d = self.re, self.im, other.re, other.im
            return GaussQ(a * c - b * d, a * d + b * c)
        if _is_rational(other):
            return GaussQ(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, GaussQ):
            c, d = other.re, other.im
            n = c * c + d * d
            if not n:
                raise ZeroDivisionError("GaussQ division by zero")
            a, b = self.re, self.im
            return GaussQ((a * c + b * d) / n, (b * c - a * d) / n)
        if _is_rational(other):
            if not other:
                raise ZeroDivisionError("GaussQ division by zero")
            return GaussQ(self.re / other, self.im / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if _is_rational(other):
            return GaussQ(other, 0) / self
        return NotImplemented

    def __neg__(self):
        return GaussQ(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return 1 / (self ** -k)
        out = GaussQ(1, 0)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # comparison -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, GaussQ):
            return self.re == other.re and self.im == other.im
        if _is_rational(other):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conjugate(self):
        return GaussQ(self.re, -self.im)

    def __repr__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


_ZERO = mpq(0)
I = GaussQ(0, 1)


def _is_rational(x) -> bool:
    return isinstance(x, (int, Rational)) or type(x) is type(_ZERO)


def parse_rational(text) -> mpq:
    """Parse ``"p/q"``, ``"p"``, an int or a Fraction into an exact rational."""
    if isinstance(text, str):
        text = text.strip()
        if not text:
            raise ValueError("empty rational literal")
        try:
            return mpq(text)
        except ValueError as exc:
            raise ValueError(f"not a rational literal: {text!r}") from exc
    if isinstance(text, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(text, (int, Fraction)) or type(text) is type(_ZERO):
        return mpq(text)
    raise TypeError(f"cannot read {text!r} as an exact rational (floats are rejected)")


def as_scalar(x):
    """Coerce ints/Fractions/strings to mpq; leave field elements alone."""
    if type(x) is type(_ZERO) or isinstance(x, GaussQ):
        return x
    if isinstance(x, (int, Fraction, str)):
        return parse_rational(x)
    if isinstance(x, float):
        raise TypeError("floats are not allowed in exact computations")
    return x


def conj(x):
    if isinstance(x, GaussQ):
        return x.conjugate()
    return x


def canon(x):
    """Collapse a GaussQ with zero imaginary part to a plain mpq."""
    if isinstance(x, GaussQ) and not x.im:
        return x.re
    return x


def is_real(x) -> bool:
    return not isinstance(x, GaussQ) or not x.im


def real_part(x):
    return x.re if isinstance(x, GaussQ) else x


def imag_part(x):
    return x.im if isinstance(x, GaussQ) else _ZERO

"""Gaussian-rational scalars: complex numbers with exact rational parts.

All amplitudes, operator entries and polynomial coefficients in this package
are instances of :class:`GaussianRational`.  Arithmetic is exact; there is no
rounding anywhere in this module.
"""

from __future__ import annotations

import re as _re
from fractions import Fraction

try:
    # gmpy2 rationals are drop-in compatible with Fraction (same string form,
    # equal hashes for equal values) and considerably faster on large operands.
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover - gmpy2 is an optional accelerator
    Rational = Fraction


class GaussianRational:
    """An exact complex number ``re + im*i`` with rational ``re`` and ``im``.

    Immutable and hashable.  Supports field arithmetic with other
    GaussianRationals and with plain ints / Fractions.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if type(re) is not Rational:
            re = Rational(re)
        if type(im) is not Rational:
            im = Rational(im)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @staticmethod
    def _make(re, im) -> "GaussianRational":
        # internal fast constructor: both arguments must already be rationals
        x = object.__new__(GaussianRational)
        object.__setattr__(x, "re", re)
        object.__setattr__(x, "im", im)
        return x

    # -- constructors -------------------------------------------------------

    @staticmethod
    def coerce(value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction, Rational)):
            return GaussianRational(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to GaussianRational")

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        o = other if type(other) is GaussianRational else GaussianRational.coerce(other)
        return GaussianRational._make(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational._make(-self.re, -self.im)

    def __sub__(self, other):
        o = other if type(other) is GaussianRational else GaussianRational.coerce(other)
        return GaussianRational._make(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        o = other if type(other) is GaussianRational else GaussianRational.coerce(other)
        if not self.im and not o.im:
            return GaussianRational._make(self.re * o.re, self.im)
        return GaussianRational._make(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("inverse of zero GaussianRational")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * GaussianRational.coerce(other).inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparison / hashing -----------------------------------------------

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return not self.is_zero()

    # -- conversion ---------------------------------------------------------

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        return format_scalar(self)


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def _format_fraction(f: Fraction) -> str:
    return str(f)


def format_scalar(z: GaussianRational) -> str:
    """Render as ``p/q``, ``r/si`` or ``p/q+r/si`` (lowest terms)."""
    if not z.im:
        return _format_fraction(z.re)
    imag = f"{_format_fraction(z.im)}i"
    if not z.re:
        return imag
    if z.im > 0:
        return f"{_format_fraction(z.re)}+{imag}"
    return f"{_format_fraction(z.re)}{imag}"


_SCALAR_RE = _re.compile(
    r"""^\s*
    (?:(?P<re>[+-]?\d+(?:/\d+)?)(?=\s*$|[+-]))?
    (?:(?P<im>[+-]?\d+(?:/\d+)?)i)?
    \s*$""",
    _re.VERBOSE,
)


def parse_scalar(text: str) -> GaussianRational:
    """Parse the text form produced by :func:`format_scalar`."""
    m = _SCALAR_RE.match(text)
    if not m or (m.group("re") is None and m.group("im") is None):
        raise ValueError(f"malformed scalar: {text!r}")
    def _rat(text):
        # gmpy2's parser rejects an explicit leading '+'
        return Rational(text[1:] if text.startswith("+") else text)

    re_part = _rat(m.group("re")) if m.group("re") else Rational(0)
    im_part = _rat(m.group("im")) if m.group("im") else Rational(0)
    return GaussianRational(re_part, im_part)


def rational_sqrt(f):
    """Exact square root of a nonnegative rational, or None if irrational."""
    if f < 0:
        return None
    num, den = f.numerator, f.denominator
    rn = _isqrt_exact(num)
    rd = _isqrt_exact(den)
    if rn is None or rd is None:
        return None
    return Rational(rn, rd)


def _isqrt_exact(n: int):
    from math import isqrt

    r = isqrt(n)
    return r if r * r == n else None


def gaussian_sqrt(z: GaussianRational):
    """Exact square root within the Gaussian rationals, or None.

    Solves (x+yi)^2 = re+im*i:  x^2-y^2 = re, 2xy = im.  A solution exists in
    the Gaussian rationals iff the norm re^2+im^2 is a rational square and the
    derived components are rational squares as well.
    """
    if z.is_zero():
        return GaussianRational(0)
    n = rational_sqrt(z.re * z.re + z.im * z.im)
    if n is None:
        return None
    x2 = (z.re + n) / 2
    x = rational_sqrt(x2)
    if x is None or x == 0:
        # pure imaginary root: z.re = -n, root = y*i with y^2 = n... handle below
        y2 = (n - z.re) / 2
        y = rational_sqrt(y2)
        if y is None or y == 0:
            return None
        # x determined by 2xy = im
        x = z.im / (2 * y)
        cand = GaussianRational(x, y)
        return cand if cand * cand == z else None
    y = z.im / (2 * x)
    cand = GaussianRational(x, y)
    return cand if cand * cand == z else None

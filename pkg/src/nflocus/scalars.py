"""Scalar types: exact Gaussian rationals and precision-tracked complexes.

``GaussianRational`` is the coefficient field for every exact computation:
numbers a + b*i with rational a, b, always stored in reduced form.  It is the
smallest field closed under the complex conjugation that the bigrading
symmetry checks need.

``NumericComplex`` wraps a pair of mpmath floats plus an explicit binary
precision.  Arithmetic results carry the minimum precision of the operands.
"""

import re as _re

import mpmath
from mpmath import mp

from ._backend import RONE, RZERO, rational, rational_from_str, rational_to_fraction
from .errors import ExactnessError

_TERM_RE = _re.compile(
    r"([+-]?)(?:(\d+(?:/\d+)?)\s*\*?\s*(i)?|(i))"
)


class GaussianRational:
    """Exact complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _as_rat(re))
        object.__setattr__(self, "im", _as_rat(im))

    def __setattr__(self, *a):
        raise AttributeError("GaussianRational is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_string(text):
        """Parse "a/b+c/d*i" style exact literals ("3", "-i", "1/2-2/3*i")."""
        s = text.strip().replace(" ", "")
        # unicode minus tolerated on input
        s = s.replace("−", "-")
        if not s:
            raise ValueError("empty scalar literal")
        pos = 0
        re_part = RZERO
        im_part = RZERO
        seen = []
        while pos < len(s):
            m = _TERM_RE.match(s, pos)
            if m is None or m.end() == m.start():
                raise ValueError(f"bad scalar literal {text!r} at offset {pos}")
            sign = -1 if m.group(1) == "-" else 1
            if m.group(4) or m.group(3):
                mag = rational_from_str(m.group(2)) if m.group(2) else RONE
                im_part = im_part + sign * mag
                seen.append("im")
            else:
                re_part = re_part + sign * rational_from_str(m.group(2))
                seen.append("re")
            pos = m.end()
        if len(seen) > 2 or (len(seen) == 2 and seen[0] == seen[1]):
            raise ValueError(f"bad scalar literal {text!r}")
        return GaussianRational(re_part, im_part)

    # -- arithmetic ----------------------------------------------------
    # Operations with NumericComplex defer to its reflected methods, so a
    # mixed expression lands in numeric mode at the numeric operand's
    # precision.

    def __add__(self, other):
        if isinstance(other, NumericComplex):
            return NotImplemented
        other = qi(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, NumericComplex):
            return NotImplemented
        other = qi(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        if isinstance(other, NumericComplex):
            return NotImplemented
        return qi(other).__sub__(self)

    def __mul__(self, other):
        if isinstance(other, NumericComplex):
            return NotImplemented
        other = qi(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, NumericComplex):
            return NotImplemented
        other = qi(other)
        d = other.re * other.re + other.im * other.im
        if d == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / d,
            (self.im * other.re - self.re * other.im) / d,
        )

    def __rtruediv__(self, other):
        if isinstance(other, NumericComplex):
            return NotImplemented
        return qi(other).__truediv__(self)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def abs2(self):
        """Squared modulus, an exact nonnegative rational."""
        return self.re * self.re + self.im * self.im

    # -- predicates ----------------------------------------------------

    def is_zero(self):
        return self.re == 0 and self.im == 0

    def is_real(self):
        return self.im == 0

    def is_integer(self):
        return self.im == 0 and self.re.denominator == 1

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, NumericComplex):
            return NotImplemented
        try:
            other = qi(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    # -- conversions ---------------------------------------------------

    def to_numeric(self, precision=256):
        with mp.workprec(precision):
            return NumericComplex(
                mpmath.mpf(self.re.numerator) / mpmath.mpf(self.re.denominator),
                mpmath.mpf(self.im.numerator) / mpmath.mpf(self.im.denominator),
                precision,
            )

    def to_mpc(self, precision=256):
        n = self.to_numeric(precision)
        return mpmath.mpc(n.re, n.im)

    def __complex__(self):
        return complex(
            self.re.numerator / self.re.denominator,
            self.im.numerator / self.im.denominator,
        )

    def __str__(self):
        if self.im == 0:
            return _rat_str(self.re)
        imag = _rat_str(self.im)
        if imag == "1":
            imag = "i"
        elif imag == "-1":
            imag = "-i"
        else:
            imag += "*i"
        if self.re == 0:
            return imag
        if not imag.startswith("-"):
            imag = "+" + imag
        return _rat_str(self.re) + imag

    def __repr__(self):
        return f"qi('{self}')"


def _rat_str(r):
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


def _as_rat(x):
    if isinstance(x, int):
        return rational(x)
    if isinstance(x, str):
        return rational_from_str(x)
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return rational(x.numerator, x.denominator)
    raise TypeError(f"cannot build a rational from {type(x).__name__}")


def qi(x, im=None):
    """Coerce ints, rationals, strings or pairs to GaussianRational."""
    if im is not None:
        return GaussianRational(x, im)
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, str):
        return GaussianRational.from_string(x)
    if isinstance(x, NumericComplex):
        raise ExactnessError("cannot coerce a numeric scalar to exact")
    return GaussianRational(x)


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


class NumericComplex:
    """Arbitrary-precision complex value with explicit precision in bits."""

    __slots__ = ("re", "im", "precision")

    def __init__(self, re, im=0, precision=256):
        if precision <= 0:
            raise ValueError("precision must be positive")
        with mp.workprec(precision):
            object.__setattr__(self, "re", +mpmath.mpf(re))
            object.__setattr__(self, "im", +mpmath.mpf(im))
        object.__setattr__(self, "precision", int(precision))

    def __setattr__(self, *a):
        raise AttributeError("NumericComplex is immutable")

    @staticmethod
    def from_mpc(z, precision):
        return NumericComplex(z.real, z.imag, precision)

    def _binary(self, other, op):
        other = _as_numeric(other, self.precision)
        prec = min(self.precision, other.precision)
        with mp.workprec(prec):
            z = op(mpmath.mpc(self.re, self.im), mpmath.mpc(other.re, other.im))
        return NumericComplex.from_mpc(z, prec)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return _as_numeric(other, self.precision)._binary(self, lambda a, b: a - b)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return _as_numeric(other, self.precision)._binary(self, lambda a, b: a / b)

    def __neg__(self):
        return NumericComplex(-self.re, -self.im, self.precision)

    def conjugate(self):
        return NumericComplex(self.re, -self.im, self.precision)

    def abs2(self):
        with mp.workprec(self.precision):
            return self.re * self.re + self.im * self.im

    def __abs__(self):
        with mp.workprec(self.precision):
            return mpmath.sqrt(self.abs2())

    def is_zero(self, tol=None):
        if tol is None:
            return self.re == 0 and self.im == 0
        return abs(self) <= tol

    def __eq__(self, other):
        try:
            other = _as_numeric(other, self.precision)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def to_mpc(self):
        return mpmath.mpc(self.re, self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __str__(self):
        digits = mp_digits(self.precision)
        return "(%s, %s)" % (
            mpmath.nstr(self.re, digits),
            mpmath.nstr(self.im, digits),
        )

    def __repr__(self):
        return f"NumericComplex{self} @ {self.precision} bits"


def _as_numeric(x, precision):
    if isinstance(x, NumericComplex):
        return x
    if isinstance(x, GaussianRational):
        return x.to_numeric(precision)
    if isinstance(x, (int, float, mpmath.mpf)):
        return NumericComplex(x, 0, precision)
    if isinstance(x, mpmath.mpc):
        return NumericComplex.from_mpc(x, precision)
    raise TypeError(f"cannot coerce {type(x).__name__} to NumericComplex")


def mp_digits(precision):
    """Decimal digits faithfully representing a binary precision."""
    return max(6, int(precision * 0.30103) + 2)


def rational_to_str(r):
    return _rat_str(r)


def fraction_of(r):
    return rational_to_fraction(r)

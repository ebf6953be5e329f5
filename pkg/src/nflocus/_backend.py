"""Rational arithmetic backend.

All exact arithmetic in the package runs on top of a single rational
number type.  When gmpy2 is importable its C-implemented ``mpq`` is used;
otherwise we fall back to ``fractions.Fraction``.  Both expose the same
surface (arithmetic operators, ``numerator``/``denominator``), so the rest
of the package is backend-agnostic.  Set ``NFLOCUS_PURE_PYTHON=1`` to force
the pure-Python fallback (used by the backend benchmark).
"""

import os
from fractions import Fraction

if os.environ.get("NFLOCUS_PURE_PYTHON") == "1":
    _gmpy2 = None
else:
    try:
        import gmpy2 as _gmpy2
    except ImportError:  # pragma: no cover
        _gmpy2 = None

HAVE_GMPY2 = _gmpy2 is not None

if HAVE_GMPY2:
    _mpq = _gmpy2.mpq

    def rational(a=0, b=1):
        return _mpq(a, b)

    def rational_from_str(s):
        return _mpq(s)

    def is_rational(x):
        return isinstance(x, type(_mpq(0)))

else:
    def rational(a=0, b=1):
        return Fraction(a, b)

    def rational_from_str(s):
        return Fraction(s)

    def is_rational(x):
        return isinstance(x, Fraction)

BACKEND_NAME = "gmpy2" if HAVE_GMPY2 else "fractions"

RZERO = rational(0)
RONE = rational(1)


def rational_to_fraction(x):
    return Fraction(int(x.numerator), int(x.denominator))

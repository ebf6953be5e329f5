"""Certified isolation of polynomial roots in a disk.

Pipeline: exact squarefree decomposition, arbitrary-precision root
approximation, rationalization of centers, then an exact Rouche test
(against the linear Taylor part) that certifies exactly one root per box.
Exact rational roots are recognized and reported with radius zero.
"""

from fractions import Fraction

import mpmath
from mpmath import mp

from ._backend import rational
from .bounds import abs_ub, sqrt_lb, sqrt_ub
from .errors import SolverError
from .polys import Poly, squarefree_decomposition
from .scalars import GaussianRational, qi


class IsolatedRoot:
    """A certified root: disk |s - center| <= radius holds exactly one root
    (radius 0 means the center is the root, exactly)."""

    __slots__ = ("center", "radius", "multiplicity", "exact")

    def __init__(self, center, radius, multiplicity, exact):
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", radius)
        object.__setattr__(self, "multiplicity", multiplicity)
        object.__setattr__(self, "exact", exact)

    def __setattr__(self, *a):
        raise AttributeError("IsolatedRoot is immutable")

    def __repr__(self):
        tag = "exact" if self.exact else f"radius {self.radius}"
        return f"IsolatedRoot({self.center}, {tag}, mult {self.multiplicity})"


def fraction_from_mpf(x):
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    if man == 0:
        return Fraction(0)
    val = Fraction(man, 1) * (Fraction(2) ** exp)
    return -val if sign else val


def rationalize_mpc(z, max_den):
    re = fraction_from_mpf(z.real).limit_denominator(max_den)
    im = fraction_from_mpf(z.imag).limit_denominator(max_den)
    return GaussianRational(rational(re.numerator, re.denominator),
                            rational(im.numerator, im.denominator))


def _newton_refine(poly, z, precision, steps=60):
    dp = poly.derivative()
    with mp.workprec(precision + 32):
        coeffs = [c.to_mpc(precision + 32) for c in poly.coeffs]
        dcoeffs = [c.to_mpc(precision + 32) for c in dp.coeffs]

        def ev(cs, t):
            acc = mpmath.mpc(0)
            for c in reversed(cs):
                acc = acc * t + c
            return acc

        z = mpmath.mpc(z)
        for _ in range(steps):
            d = ev(dcoeffs, z)
            if d == 0:
                break
            step = ev(coeffs, z) / d
            z = z - step
            if abs(step) < mpmath.mpf(2) ** (-precision):
                break
    return z


def _rouche_certified(poly, center, rho):
    """Exact test: |g0| + sum_{k>=2} |g_k| rho^k < |g1| rho for the Taylor
    shift g of poly at center implies exactly one root in the rho-disk."""
    g = poly.shift(center)
    if len(g.coeffs) < 2 or g.coeffs[1].is_zero():
        return False
    lhs = abs_ub(g.coeffs[0])
    rk = rho * rho
    for k in range(2, len(g.coeffs)):
        lhs = lhs + abs_ub(g.coeffs[k]) * rk
        rk = rk * rho
    rhs = sqrt_lb(g.coeffs[1].abs2()) * rho
    return lhs < rhs


def isolate_roots(poly, radius, precision=256, max_rounds=6):
    """All roots of poly in the open disk |s| < radius, certified.

    Returns a list of IsolatedRoot sorted by (Re, Im) of the center.  Raises
    SolverError if a root cannot be separated from the disk boundary.
    """
    if poly.is_zero():
        raise SolverError("cannot isolate roots of the zero polynomial")
    radius = _as_rational(radius)
    out = []
    val = poly.valuation()
    if val and val > 0:
        if radius > 0:
            out.append(IsolatedRoot(qi(0), rational(0), val, True))
        poly = Poly(poly.coeffs[val:])
    if poly.degree <= 0:
        return _sorted_roots(out)
    for factor, mult in squarefree_decomposition(poly):
        out.extend(_isolate_squarefree(factor, mult, radius, precision, max_rounds))
    return _sorted_roots(out)


def _isolate_squarefree(factor, mult, radius, precision, max_rounds):
    deg = factor.degree
    if deg == 0:
        return []
    roots = _numeric_roots(factor, precision)
    boxes = []
    for z in roots:
        # exact rational root?
        cand = rationalize_mpc(z, 10**8)
        if factor.eval(cand).is_zero():
            boxes.append((cand, rational(0)))
            continue
        boxes.append(_certify_box(factor, z, precision, max_rounds))
    _check_disjoint(boxes)
    out = []
    for center, rho in boxes:
        side = _disk_side(center, rho, radius)
        if side is None:
            # boundary-straddling: refine once more at higher precision
            refined = None
            if rho > 0:
                z = mpmath.mpc(complex(center))
                refined = _certify_box(factor, z, precision * 2, max_rounds)
                side = _disk_side(refined[0], refined[1], radius)
            if side is None:
                raise SolverError(
                    "root cannot be separated from the disk boundary"
                )
            center, rho = refined
        if side == "inside":
            out.append(IsolatedRoot(center, rho, mult, rho == 0))
    return out


def _numeric_roots(factor, precision):
    with mp.workprec(precision + 32):
        coeffs = [c.to_mpc(precision + 32) for c in reversed(factor.coeffs)]
        roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=precision)
        return [_newton_refine(factor, z, precision) for z in roots]


def _certify_box(factor, z, precision, max_rounds):
    for attempt in range(max_rounds):
        den = 2 ** (precision // 2 + attempt * 16)
        center = rationalize_mpc(z, den)
        with mp.workprec(precision + 32):
            err = abs(mpmath.mpc(z) - center.to_mpc(precision + 32))
            rho_f = fraction_from_mpf(err * 4 + mpmath.mpf(2) ** (-precision))
        rho = rational(rho_f.numerator, rho_f.denominator)
        for _ in range(8):
            if _rouche_certified(factor, center, rho):
                return (center, rho)
            rho = rho * 4  # widen: center may sit between tight clusters
        z = _newton_refine(factor, z, precision * (attempt + 2))
    raise SolverError("could not certify an isolating box around a root")


def _check_disjoint(boxes):
    for i in range(len(boxes)):
        for j in range(i + 1, len(boxes)):
            ci, ri = boxes[i]
            cj, rj = boxes[j]
            gap = sqrt_lb((ci - cj).abs2())
            if not gap > ri + rj:
                raise SolverError("isolating boxes overlap; refine precision")


def _disk_side(center, rho, radius):
    """'inside' if the whole box is inside |s| < radius, 'outside' if fully
    outside, None if straddling."""
    c_ub = abs_ub(center)
    c_lb = sqrt_lb(center.abs2())
    if c_ub + rho < radius:
        return "inside"
    if c_lb - rho > radius or (rho == 0 and c_lb >= radius and c_ub >= radius and center.abs2() >= radius * radius):
        return "outside"
    if rho == 0:
        return "inside" if center.abs2() < radius * radius else "outside"
    return None


def _sorted_roots(roots):
    def key(r):
        c = r.center
        return (
            Fraction(int(c.re.numerator), int(c.re.denominator)),
            Fraction(int(c.im.numerator), int(c.im.denominator)),
        )

    return sorted(roots, key=key)


def _as_rational(r):
    if isinstance(r, GaussianRational):
        if r.im != 0:
            raise ValueError("radius must be a real rational")
        return r.re
    if isinstance(r, str):
        g = GaussianRational.from_string(r)
        return _as_rational(g)
    if hasattr(r, "numerator"):
        return rational(r.numerator, r.denominator)
    if isinstance(r, int):
        return rational(r)
    raise ValueError("radius must be rational")


def common_roots_in_disk(polys, radius, precision=256):
    """Certified common roots of several polynomials inside the disk.

    Intersection is taken by exact gcd, never by numeric coincidence.
    Returns (roots, identically_zero) where identically_zero is True when
    every polynomial vanishes identically.
    """
    from .polys import gcd_many

    nonzero = [p for p in polys if not p.is_zero()]
    if not nonzero:
        return [], True
    g = gcd_many(nonzero)
    if g.degree <= 0:
        return [], False
    return isolate_roots(g, radius, precision), False

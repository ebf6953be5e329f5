"""Interior normal-function germs: the canonical real grading along the
disk, integrality and extension classes, and the zero-locus description
with a certified radius.

The zero locus through the center is cut out exactly by the vanishing of
the -1 eigencomponent of the chart coordinate; the certified radius is the
exact-rational bound inside which the displacement of the real grading
stays below half the lattice gap, so no other integral-grading component
can enter.
"""

from fractions import Fraction

import mpmath
from mpmath import mp

from ._backend import rational
from .bounds import (
    abs_ub,
    hermitian_projector,
    max_eigenvalue_ub,
    sqrt_ub,
    vec_norm_ub,
)
from .errors import (
    MHSValidationError,
    NotAZeroAtCenterError,
    OutOfRadiusError,
    SolverError,
    UnsupportedShapeError,
)
from .filtrations import Grading, TwoStepFrame, WeightFiltration
from .linalg import (
    Matrix,
    Subspace,
    mat_to_vec,
    nilpotent_exp,
    solve_unique,
    solve_with_kernel,
    unit_vector,
    vec,
    vec_add,
    vec_sub,
)
from .mhs import (
    HodgeFiltration,
    MixedHodgeStructure,
    PolarizationForm,
    chart_subalgebra,
    deligne_grading,
    validate_polarization,
)
from .polys import (
    Poly,
    PolyMatrix,
    poly_exp,
    poly_log_unipotent,
    psi_of_ad_poly,
)
from .roots import common_roots_in_disk
from .scalars import GaussianRational, NumericComplex, ONE, ZERO, qi


class InteriorGerm:
    """Local data of a normal function at an interior point.

    V_Z is the standard lattice; W is two-step with the given integral
    generators of W_{-1} forming a saturated lattice basis; Q polarizes the
    weight -1 graded piece in those coordinates; Gamma is a matrix
    polynomial with coefficients in the interior chart subalgebra and zero
    constant term.
    """

    __slots__ = (
        "dimension",
        "w",
        "frame",
        "h_gens",
        "h_matrix",
        "q_form",
        "f",
        "gamma",
        "radius",
        "name",
        "notes",
        "mhs",
        "q_sub",
        "p_star",
    )

    def __init__(self, h_gens, q_matrix, f_steps, gamma, radius, name="", notes=""):
        gens = [vec(g) for g in h_gens]
        dimension = len(gens[0]) if gens else 1
        w = WeightFiltration.two_step(
            dimension, Subspace.span(gens, dimension) if gens else Subspace.zero(dimension)
        )
        frame = TwoStepFrame(w)
        h_matrix = Matrix.from_columns(gens) if gens else None
        q_form = q_matrix if isinstance(q_matrix, PolarizationForm) else PolarizationForm(q_matrix)
        if q_form.dim != dimension - 1:
            raise UnsupportedShapeError("polarization size must be dim W_{-1}")
        f = f_steps if isinstance(f_steps, HodgeFiltration) else HodgeFiltration(dimension, f_steps)
        mhs = MixedHodgeStructure(f, w).require_valid()
        if not isinstance(gamma, PolyMatrix):
            gamma = PolyMatrix(gamma)
        if not gamma.coeff(0).is_zero():
            raise SolverError("chart coordinate must vanish at the center")
        radius = _as_rat(radius)
        if not radius > 0:
            raise ValueError("radius must be positive")
        q_sub = chart_subalgebra(mhs, "interior")
        for k in range(1, gamma.degree + 1):
            ck = gamma.coeff(k)
            if ck.is_zero():
                continue
            if q_sub.dim == 0 or not q_sub.contains(mat_to_vec(ck)):
                raise SolverError(
                    f"coefficient of s^{k} is not in the chart subalgebra"
                )
        p_star = _transverse_level(f, w)
        f0h = _f0h_coords(f.step(p_star), w, h_matrix)
        rep = validate_polarization(f0h, q_form)
        if not rep.ok:
            raise MHSValidationError(f"polarization check failed: {rep.details}", rep)
        for slot, value in (
            ("dimension", dimension),
            ("w", w),
            ("frame", frame),
            ("h_gens", tuple(gens)),
            ("h_matrix", h_matrix),
            ("q_form", q_form),
            ("f", f),
            ("gamma", gamma),
            ("radius", radius),
            ("name", name),
            ("notes", notes),
            ("mhs", mhs),
            ("q_sub", q_sub),
            ("p_star", p_star),
        ):
            object.__setattr__(self, slot, value)

    def __setattr__(self, *a):
        raise AttributeError("InteriorGerm is immutable")

    # -- coordinates -----------------------------------------------------

    def h_coords(self, v):
        """Coordinates of a W_{-1} vector in the lattice basis of W_{-1}."""
        return solve_unique(self.h_matrix, vec(v))

    def h_embed(self, coords):
        return self.h_matrix.apply(vec(coords))

    def check_radius(self, s0):
        if isinstance(s0, GaussianRational):
            if not s0.abs2() < self.radius * self.radius:
                raise OutOfRadiusError(f"|s0| >= radius {self.radius}")
        else:
            with mp.workprec(64):
                if not abs(s0.to_mpc()) < mpmath.mpf(
                    self.radius.numerator
                ) / mpmath.mpf(self.radius.denominator):
                    raise OutOfRadiusError(f"|s0| >= radius {self.radius}")


def _as_rat(r):
    if isinstance(r, GaussianRational):
        if r.im != 0:
            raise ValueError("radius must be real")
        return r.re
    if isinstance(r, str):
        return _as_rat(GaussianRational.from_string(r))
    if hasattr(r, "numerator"):
        return rational(r.numerator, r.denominator)
    return rational(r)


def _transverse_level(f, w):
    """Largest p with F^p not contained in W_{-1}."""
    h = w.step(-1)
    for p in sorted(f.support(), reverse=True):
        if not h.contains_subspace(f.step(p)):
            return p
    raise UnsupportedShapeError("no F step surjects onto Gr_0")


def _f0h_coords(f_step, w, h_matrix):
    """F^p /\\ W_{-1} expressed in the lattice coordinates of W_{-1}."""
    inter = f_step.intersect(w.step(-1))
    if inter.dim == 0:
        return Subspace.zero(h_matrix.cols if h_matrix else 0)
    coords = [solve_unique(h_matrix, v) for v in inter.basis]
    return Subspace.span(coords, h_matrix.cols)


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


class NumericFiltration:
    """Steps of a filtration with arbitrary-precision complex columns."""

    __slots__ = ("ambient_dim", "steps", "precision")

    def __init__(self, ambient_dim, steps, precision):
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "steps", steps)
        object.__setattr__(self, "precision", precision)

    def __setattr__(self, *a):
        raise AttributeError("NumericFiltration is immutable")

    def step(self, p):
        return self.steps.get(p, [])


def filtration_at(germ, s0):
    """exp(Gamma(s0)) applied to the base filtration; exact at exact points."""
    germ.check_radius(s0)
    if isinstance(s0, GaussianRational):
        g = nilpotent_exp(germ.gamma.eval(s0))
        return germ.f.apply(g)
    prec = s0.precision
    cols = germ.gamma.eval_numeric(s0.to_mpc(), prec)
    g = Matrix(cols, precision=prec)
    g = nilpotent_exp(g)
    steps = {}
    for p in germ.f.support():
        base = germ.f.step(p)
        if base.dim == 0:
            continue
        steps[p] = [g.apply(v) for v in base.basis]
    return NumericFiltration(germ.dimension, steps, prec)


class LiftedGrading:
    """Two-step grading presented by its lift vector (exact or numeric)."""

    __slots__ = ("frame", "lift", "exact", "residual", "error")

    def __init__(self, frame, lift, exact, residual=None, error=None):
        object.__setattr__(self, "frame", frame)
        object.__setattr__(self, "lift", tuple(lift))
        object.__setattr__(self, "exact", exact)
        object.__setattr__(self, "residual", residual)
        object.__setattr__(self, "error", error)

    def __setattr__(self, *a):
        raise AttributeError("LiftedGrading is immutable")

    def to_grading(self):
        if not self.exact:
            raise SolverError("numeric lift has no exact grading")
        return self.frame.grading_from_lift(self.lift)

    def as_matrix(self):
        if not self.exact:
            raise SolverError("numeric lift has no exact matrix")
        return self.frame.lift_matrix(self.lift)

    def is_integral(self):
        if not self.exact:
            raise SolverError("integrality of a numeric lift is not decidable")
        return all(x.is_integer() for x in self.lift)

    def h_displacement(self, germ):
        """Lift minus the reference lift, in W_{-1} lattice coordinates."""
        if not self.exact:
            raise SolverError("exact displacement needs an exact lift")
        return germ.h_coords(vec_sub(self.lift, germ.frame.lift0))

    def numeric_h_coords(self, germ, precision=None):
        """W_{-1} lattice coordinates of lift - lift0, as mpf pairs."""
        prec = precision or (256 if self.exact else self.error_precision())
        with mp.workprec(prec + 16):
            hm = mpmath.matrix(
                [
                    [x.to_mpc(prec + 16) for x in row]
                    for row in germ.h_matrix.entries
                ]
            )
            diff = []
            for a, b in zip(self.lift, germ.frame.lift0):
                if isinstance(a, NumericComplex):
                    diff.append(a.to_mpc() - b.to_mpc(prec + 16))
                else:
                    diff.append((a - b).to_mpc(prec + 16))
            sol = mpmath.lu_solve(hm, mpmath.matrix(diff))
            return [sol[i] for i in range(sol.rows)]

    def error_precision(self):
        for x in self.lift:
            if isinstance(x, NumericComplex):
                return x.precision
        return 256

    def lattice_distance(self, germ, precision=None):
        """Euclidean distance of the displacement to the integer lattice."""
        prec = precision or self.error_precision()
        coords = self.numeric_h_coords(germ, prec)
        with mp.workprec(prec + 16):
            total = mpmath.mpf(0)
            for z in coords:
                re = z.real - mpmath.nint(z.real)
                total += re * re + z.imag * z.imag
            return mpmath.sqrt(total)

    def __repr__(self):
        kind = "exact" if self.exact else "numeric"
        return f"LiftedGrading({kind}, lift={[str(x) for x in self.lift]})"


def grading_at(germ, s0):
    """The unique real grading of W preserving F(s0).

    Exact points give an exact lift (and agree with the Deligne grading of
    the evaluated pair); numeric points solve the same real linear system
    in working precision.
    """
    filt = filtration_at(germ, s0)
    if isinstance(s0, GaussianRational):
        basis = filt.step(germ.p_star).basis
        lift = _real_grading_lift_exact(germ.frame, basis)
        return LiftedGrading(germ.frame, lift, True)
    prec = s0.precision
    cols = filt.step(germ.p_star)
    lift, residual = _real_grading_lift_numeric(germ.frame, cols, prec)
    return LiftedGrading(
        germ.frame,
        [NumericComplex.from_mpc(x, prec) for x in lift],
        False,
        residual=residual,
    )


def _real_grading_lift_exact(frame, f_basis):
    """Solve lift0 + sum x_i h_i in span(f_basis) with the x_i real."""
    d = frame.ambient_dim
    hb = list(frame.h_basis)
    n_h = len(hb)
    n_f = len(f_basis)
    cols = []
    for b in hb:  # real columns: -h_i
        col = [-x.re for x in b] + [-x.im for x in b]
        cols.append([qi(c) for c in col])
    for fvec in f_basis:  # complex columns: re and im parts
        cols.append([qi(x.re) for x in fvec] + [qi(x.im) for x in fvec])
        cols.append([qi(-x.im) for x in fvec] + [qi(x.re) for x in fvec])
    rhs = [qi(x.re) for x in frame.lift0] + [qi(x.im) for x in frame.lift0]
    m = Matrix.from_columns(cols)
    sol, kernel = solve_with_kernel(m, vec(rhs))
    for k in kernel:
        if any(not k[i].is_zero() for i in range(n_h)):
            raise SolverError(
                "real grading is not unique (invalid germ: F meets the real "
                "weight -1 subspace)"
            )
    x = sol[:n_h]
    lift = list(frame.lift0)
    for c, b in zip(x, hb):
        if not c.is_zero():
            lift = [a + c * bb for a, bb in zip(lift, b)]
    return tuple(lift)


def _real_grading_lift_numeric(frame, f_cols, precision):
    d = frame.ambient_dim
    hb = list(frame.h_basis)
    n_h = len(hb)
    with mp.workprec(precision + 16):
        cols = []
        for b in hb:
            col = [-mpmath.mpf(x.re.numerator) / mpmath.mpf(x.re.denominator) for x in b]
            cols.append(col + [mpmath.mpf(0)] * d)
        for fvec in f_cols:
            zs = [x.to_mpc() if isinstance(x, NumericComplex) else x.to_mpc(precision) for x in fvec]
            cols.append([z.real for z in zs] + [z.imag for z in zs])
            cols.append([-z.imag for z in zs] + [z.real for z in zs])
        rhs = [mpmath.mpf(int(x.re.numerator)) / mpmath.mpf(int(x.re.denominator)) for x in frame.lift0]
        rhs = rhs + [mpmath.mpf(0)] * d
        a = mpmath.matrix(list(map(list, zip(*cols))))
        b = mpmath.matrix(rhs)
        sol, res = mpmath.qr_solve(a, b)
        x = [sol[i] for i in range(n_h)]
        scale = max([abs(v) for v in rhs] + [mpmath.mpf(1)])
        if res > scale * mpmath.mpf(2) ** (-(precision // 2)):
            raise SolverError(
                f"real grading solve residual too large: {mpmath.nstr(res, 8)}"
            )
        lift = [z.to_mpc(precision + 16) for z in frame.lift0]
        for c, bvec in zip(x, hb):
            lift = [
                a0 + c * bb.to_mpc(precision + 16) for a0, bb in zip(lift, bvec)
            ]
        return [mpmath.mpc(z) for z in lift], res


def is_integral(grading, frame=None):
    """True iff the grading maps the standard lattice to itself."""
    if isinstance(grading, LiftedGrading):
        return grading.is_integral()
    if isinstance(grading, Grading):
        return grading.is_integral()
    raise TypeError("expected a grading")


# ---------------------------------------------------------------------------
# extension classes
# ---------------------------------------------------------------------------


class ExtensionClass:
    """Intermediate-Jacobian value: fundamental-domain coordinates in the
    image of the weight -1 lattice, plus the reduction data."""

    __slots__ = ("coords", "integer_parts", "quotient_value")

    def __init__(self, coords, integer_parts, quotient_value):
        object.__setattr__(self, "coords", tuple(coords))
        object.__setattr__(self, "integer_parts", tuple(integer_parts))
        object.__setattr__(self, "quotient_value", tuple(quotient_value))

    def __setattr__(self, *a):
        raise AttributeError("ExtensionClass is immutable")

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def __repr__(self):
        cs = ", ".join(str(c) for c in self.coords)
        return f"ExtensionClass([{cs}])"


def extension_class(germ, s0, reference_lift=None):
    """Image of the weight-0 generator in H_C / (F^0 H + H_Z) at s0.

    The real-lift displacement reduces modulo the lattice coordinatewise;
    the quotient-space representative is also reported, computed through a
    complement of F^0 H(s0).
    """
    lifted = grading_at(germ, s0)
    if not lifted.exact:
        raise SolverError("extension_class needs an exact sample point")
    ref = vec(reference_lift) if reference_lift is not None else germ.frame.lift0
    if any(not x.is_integer() for x in ref):
        raise SolverError("reference grading must be integral")
    h = vec_sub(lifted.lift, ref)
    coords = germ.h_coords(h)
    fracs, ints = [], []
    for c in coords:
        if c.im != 0:
            raise SolverError("real lift has non-real lattice coordinates")
        n, d = c.re.numerator, c.re.denominator
        fl = n // d
        ints.append(int(fl))
        fracs.append(rational(n - fl * d, d))
    # quotient representative through a complement of F^0 H(s0)
    f0h = _f0h_coords(
        filtration_at(germ, s0).step(germ.p_star), germ.w, germ.h_matrix
    )
    value = _quotient_value(f0h, fracs, germ.dimension - 1)
    return ExtensionClass(fracs, ints, value)


def _quotient_value(f0h, fracs, h_dim):
    if h_dim == 0:
        return ()
    g = f0h.dim
    cols = [list(v) for v in f0h.basis]
    chosen = []
    current = f0h
    for i in range(h_dim):
        e = unit_vector(i, h_dim)
        if not current.contains(e):
            chosen.append(e)
            current = current + Subspace.span([e], h_dim)
        if current.is_full():
            break
    m = Matrix.from_columns(cols + chosen) if cols else Matrix.from_columns(chosen)
    minv = m.inverse()
    frac_vec = vec([qi(f) for f in fracs])
    coords = minv.apply(frac_vec)
    return tuple(coords[g:])


# ---------------------------------------------------------------------------
# transport polynomials
# ---------------------------------------------------------------------------


def gamma_eigencomponents(gamma, grading_matrix):
    """Split a chart polynomial by the {0, -1} eigenvalues of ad(grading)."""
    y = PolyMatrix.constant(grading_matrix)
    bracket = y @ gamma - gamma @ y
    gm1 = -bracket
    g0 = gamma - gm1
    # sanity: ad y fixes g0 and acts by -1 on gm1
    if not (y @ g0 - g0 @ y).is_zero():
        raise SolverError("0 eigencomponent check failed")
    if (y @ gm1 - gm1 @ y) != -gm1:
        raise SolverError("-1 eigencomponent check failed")
    return g0, gm1


def transport_polynomial(germ, grading_matrix=None):
    """psi(ad Gamma_0) Gamma_-1 as a matrix polynomial."""
    y = grading_matrix
    if y is None:
        y = grading_at(germ, qi(0)).as_matrix()
    g0, gm1 = gamma_eigencomponents(germ.gamma, y)
    return psi_of_ad_poly(g0, gm1), g0, gm1


# ---------------------------------------------------------------------------
# zero locus
# ---------------------------------------------------------------------------


class ZeroLocusDescription:
    """Empty / Isolated(roots) / WholeDisk with a certified radius."""

    EMPTY = "empty"
    ISOLATED = "isolated"
    WHOLE_DISK = "whole_disk"

    __slots__ = ("kind", "roots", "certified_radius")

    def __init__(self, kind, roots, certified_radius):
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "roots", tuple(roots))
        object.__setattr__(self, "certified_radius", certified_radius)

    def __setattr__(self, *a):
        raise AttributeError("ZeroLocusDescription is immutable")

    def __repr__(self):
        return (
            f"ZeroLocusDescription({self.kind}, {len(self.roots)} roots, "
            f"certified radius {self.certified_radius})"
        )


def interior_zero_locus(germ, r=None):
    """Theorem-style description of the zero locus in the disk of radius r.

    Requires the center to lie in the zero locus; otherwise raises
    NotAZeroAtCenterError carrying an Empty description valid on a computed
    neighborhood (integral gradings form a discrete set).
    """
    r = germ.radius if r is None else _as_rat(r)
    if r > germ.radius:
        raise OutOfRadiusError("requested radius exceeds the germ's disk")
    center = grading_at(germ, qi(0))
    dpoly, g0, gm1 = transport_polynomial(
        germ, germ.frame.lift_matrix(center.lift)
    )
    if not center.is_integral():
        empty_r = _empty_neighborhood_radius(germ, center, dpoly, r)
        raise NotAZeroAtCenterError(
            "the center is not a zero of the normal function",
            ZeroLocusDescription(ZeroLocusDescription.EMPTY, (), empty_r),
        )
    cert = certified_component_radius(germ, center, dpoly, r)
    coord_polys = _h_coordinate_polys(germ, gm1.apply_vector(center.lift))
    roots, identically_zero = common_roots_in_disk(coord_polys, r)
    if identically_zero:
        return ZeroLocusDescription(ZeroLocusDescription.WHOLE_DISK, (), r)
    return ZeroLocusDescription(ZeroLocusDescription.ISOLATED, roots, cert)


def _h_coordinate_polys(germ, poly_vector):
    """W_{-1} lattice coordinates of a polynomial vector (list of Polys)."""
    coeff_count = max((p.degree for p in poly_vector if not p.is_zero()), default=-1) + 1
    out = [[] for _ in range(germ.dimension - 1)]
    for k in range(coeff_count):
        coefvec = tuple(p[k] for p in poly_vector)
        coords = germ.h_coords(coefvec)
        for i, c in enumerate(coords):
            out[i].append(c)
    return [Poly(cs) for cs in out]


def _displacement_data(germ, center, dpoly):
    """h-coordinate coefficient vectors of the holomorphic displacement and
    the projector data of F^0 H at the center."""
    dvec = dpoly.apply_vector(center.lift)
    coeffs = []
    top = max((p.degree for p in dvec if not p.is_zero()), default=0)
    for k in range(top + 1):
        coefvec = tuple(p[k] for p in dvec)
        coeffs.append(germ.h_coords(coefvec))
    f0h = _f0h_coords(germ.f.step(germ.p_star), germ.w, germ.h_matrix)
    return coeffs, f0h


def _gamma_fixes_f0h(germ, f0h):
    """True iff exp(Gamma(s)) fixes F^0 H pointwise as a polynomial identity."""
    expg = poly_exp(germ.gamma)
    ident = PolyMatrix.constant(Matrix.identity(germ.dimension))
    diff = expg - ident
    for v in f0h.basis:
        ambient = germ.h_embed(v)
        if any(not p.is_zero() for p in diff.apply_vector(ambient)):
            return False
    return True


def _displacement_bound_sq(germ, coeffs, f0h, r):
    """Exact upper bound for the squared displacement of the real lift over
    |s| <= r, in W_{-1} lattice coordinates.  Requires exp(Gamma) to fix
    F^0 H (the tight path); returns None when that fails."""
    if f0h.dim == 0:
        total = rational(0)
        rk = rational(1)
        for ck in coeffs:
            total = total + vec_norm_ub(ck) * rk
            rk = rk * r
        return total * total
    if not _gamma_fixes_f0h(germ, f0h):
        return None
    h_dim = germ.dimension - 1
    b = f0h.basis_matrix()
    proj = hermitian_projector(b)          # orthogonal projector onto A
    proj_bar = proj.conjugate()            # orthogonal projector onto conj(A)
    ident = Matrix.identity(h_dim)
    # oblique projector onto A along conj(A): solve blockwise
    oblique = _oblique_projector(f0h)
    rho = max_eigenvalue_ub(proj @ proj_bar @ proj)
    rho = sqrt_ub(rho if rho > 0 else rational(0))
    if rho > 1:
        rho = rational(1)
    b1 = rational(0)
    b2 = rational(0)
    rk = rational(1)
    for ck in coeffs:
        ck_m = Matrix.from_columns([list(ck)])
        out1 = (ident - oblique) @ ck_m
        out2 = oblique @ ck_m.conjugate()
        b1 = b1 + vec_norm_ub(out1.col(0)) * rk
        b2 = b2 + vec_norm_ub(out2.col(0)) * rk
        rk = rk * r
    return (1 + rho) * (b1 * b1 + b2 * b2)


def _oblique_projector(f0h):
    """Projector onto A along conj(A), where A + conj(A) is everything."""
    h_dim = f0h.ambient_dim
    a_cols = [list(v) for v in f0h.basis]
    abar_cols = [[x.conjugate() for x in v] for v in f0h.basis]
    m = Matrix.from_columns(a_cols + abar_cols)
    minv = m.inverse()
    g = f0h.dim
    sel = Matrix.diagonal([1] * g + [0] * g)
    return m @ sel @ minv


def certified_component_radius(germ, center, dpoly, r_max, threshold_sq=None):
    """Largest dyadic fraction of r_max at which the displacement bound stays
    below half the lattice gap (or below the given squared threshold)."""
    coeffs, f0h = _displacement_data(germ, center, dpoly)
    if all(all(x.is_zero() for x in ck) for ck in coeffs):
        return r_max
    thr = rational(1, 4) if threshold_sq is None else threshold_sq

    def ok(rr):
        bound = _displacement_bound_sq(germ, coeffs, f0h, rr)
        if bound is None:
            bound = _crude_displacement_bound_sq(germ, coeffs, f0h, rr)
        return bound is not None and bound < thr

    if ok(r_max):
        return r_max
    lo, hi = rational(0), r_max
    for _ in range(40):
        mid = (lo + hi) / 2
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _crude_displacement_bound_sq(germ, coeffs, f0h, r):
    """Fallback bound when Gamma moves F^0 H: (1 + 2 |Pi_s|)^2 B(r)^2 with a
    cofactor-based bound for the oblique projector along the disk."""
    expg = poly_exp(germ.gamma)
    k0 = [germ.h_embed(v) for v in f0h.basis]
    # h-coordinates of exp(Gamma(s)) applied to the F^0 H basis
    k_polys = []
    for v0 in k0:
        imgs = expg.apply_vector(v0)
        coords = _h_coordinate_polys(germ, imgs)
        k_polys.append(coords)
    g = len(k_polys)
    h_dim = germ.dimension - 1
    entries = [[None] * (2 * g) for _ in range(h_dim)]
    for j in range(g):
        for i in range(h_dim):
            entries[i][j] = k_polys[j][i]
            entries[i][j + g] = Poly([c.conjugate() for c in k_polys[j][i].coeffs])
    msq = 2 * g
    if h_dim != msq:
        return None
    det = _poly_det(entries)
    if det.is_zero():
        return None
    from .bounds import sqrt_lb

    det_lb = sqrt_lb(det[0].abs2()) - sum(
        (abs_ub(det[k]) * (r ** k) for k in range(1, det.degree + 1)), rational(0)
    )
    if not det_lb > 0:
        return None
    adj_bound = rational(0)
    for i in range(msq):
        for j in range(msq):
            minor = _poly_det(
                [
                    [entries[a][b] for b in range(msq) if b != j]
                    for a in range(msq)
                    if a != i
                ]
            )
            acc = rational(0)
            for k in range(minor.degree + 1):
                acc = acc + abs_ub(minor[k]) * (r ** k)
            adj_bound = adj_bound + acc * acc
    adj_bound = sqrt_ub(adj_bound)
    k_norm = rational(0)
    for j in range(g):
        acc = rational(0)
        for i in range(h_dim):
            p = k_polys[j][i]
            for k in range(p.degree + 1):
                acc = acc + abs_ub(p[k]) * (r ** k)
        k_norm = k_norm + acc * acc
    k_norm = sqrt_ub(k_norm)
    pi_bound = k_norm * adj_bound / det_lb
    b_total = rational(0)
    rk = rational(1)
    for ck in coeffs:
        b_total = b_total + vec_norm_ub(ck) * rk
        rk = rk * r
    val = (1 + 2 * pi_bound) * b_total
    return val * val


def _poly_det(entries):
    n = len(entries)
    if n == 0:
        return Poly([ONE])
    if n == 1:
        return entries[0][0]
    acc = Poly()
    for j in range(n):
        minor = _poly_det(
            [[entries[i][b] for b in range(n) if b != j] for i in range(1, n)]
        )
        term = entries[0][j] * minor
        acc = acc + (term if j % 2 == 0 else -term)
    return acc


def _empty_neighborhood_radius(germ, center, dpoly, r_max):
    """Radius on which a non-integral center keeps the class away from 0."""
    coords = germ.h_coords(vec_sub(center.lift, germ.frame.lift0))
    dist_sq = rational(0)
    for c in coords:
        fr = c.re - rational(round(Fraction(int(c.re.numerator), int(c.re.denominator))))
        dist_sq = dist_sq + fr * fr + c.im * c.im
    if not dist_sq > 0:
        raise SolverError("center classified non-integral but distance is zero")
    return certified_component_radius(
        germ, center, dpoly, r_max, threshold_sq=dist_sq
    )


# ---------------------------------------------------------------------------
# scanning oracle
# ---------------------------------------------------------------------------


class ScanCandidate:
    __slots__ = ("point", "distance", "confirmed", "description", "exact_point")

    def __init__(self, point, distance, confirmed, description, exact_point):
        object.__setattr__(self, "point", point)
        object.__setattr__(self, "distance", distance)
        object.__setattr__(self, "confirmed", confirmed)
        object.__setattr__(self, "description", description)
        object.__setattr__(self, "exact_point", exact_point)

    def __setattr__(self, *a):
        raise AttributeError("ScanCandidate is immutable")

    def __repr__(self):
        return f"ScanCandidate({self.exact_point}, confirmed={self.confirmed})"


class ScanReport:
    __slots__ = ("samples", "flagged", "candidates", "all_flagged", "tolerance")

    def __init__(self, samples, flagged, candidates, all_flagged, tolerance):
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "flagged", flagged)
        object.__setattr__(self, "candidates", tuple(candidates))
        object.__setattr__(self, "all_flagged", all_flagged)
        object.__setattr__(self, "tolerance", tolerance)

    def __setattr__(self, *a):
        raise AttributeError("ScanReport is immutable")

    def candidate_points(self):
        return [c.exact_point for c in self.candidates]


def zero_scan(germ, r=None, grid=24, precision=256, tolerance=None):
    """Grid scan of the integrality distance with re-centered confirmation.

    Clusters of low-distance samples are refined by local descent; each
    refined candidate is rationalized and confirmed exactly by re-centering
    the germ there (never from floating distance alone).  Results are merged
    deterministically in lexicographic sample order.
    """
    r = germ.radius if r is None else _as_rat(r)
    scan_prec = min(precision, 128)  # refinement only needs the tolerance scale
    tol = tolerance if tolerance is not None else mpmath.mpf(2) ** (-(precision // 4))
    with mp.workprec(scan_prec + 16):
        tol = mpmath.mpf(tol)
        rr = mpmath.mpf(int(r.numerator)) / int(r.denominator)
        step = rr / grid
        total = 0
        coarse = mpmath.mpf("0.25")
        grid_flags = {}
        flagged_at = {}
        for ix in range(-grid, grid + 1):
            for iy in range(-grid, grid + 1):
                z = mpmath.mpc(ix * step, iy * step)
                if abs(z) > rr:
                    continue
                total += 1
                dist = _lattice_distance_at(germ, z, scan_prec)
                flag = dist < coarse
                grid_flags[(ix, iy)] = flag
                if flag:
                    flagged_at[(ix, iy)] = (z, dist)
        clusters = _cluster(grid_flags)
        candidates = []
        seen = []
        for cluster in clusters:
            best = None
            for key in cluster:
                if key in flagged_at:
                    z, dist = flagged_at[key]
                    if best is None or dist < best[1]:
                        best = (z, dist)
            if best is None:
                continue
            z, dist = _descend(germ, best[0], step, scan_prec, tol)
            if not dist < tol:
                continue
            if any(abs(z - z0) < step / 2 for z0 in seen):
                continue
            seen.append(z)
            cand = _confirm_candidate(germ, z, scan_prec)
            candidates.append(cand)
        flagged = len(flagged_at)
    candidates.sort(key=lambda c: (str(c.exact_point)))
    return ScanReport(total, flagged, candidates, flagged == total, tol)


def _lattice_distance_at(germ, z, precision):
    s0 = NumericComplex.from_mpc(z, precision)
    try:
        lifted = grading_at(germ, s0)
    except (SolverError, OutOfRadiusError):
        return mpmath.mpf("inf")
    return lifted.lattice_distance(germ, precision)


def _cluster(grid_flags):
    seen = set()
    clusters = []
    for key, flag in sorted(grid_flags.items()):
        if not flag or key in seen:
            continue
        stack = [key]
        comp = []
        while stack:
            cur = stack.pop()
            if cur in seen or not grid_flags.get(cur, False):
                continue
            seen.add(cur)
            comp.append(cur)
            cx, cy = cur
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    stack.append((cx + dx, cy + dy))
        clusters.append(sorted(comp))
    return clusters


def _descend(germ, z, step, precision, tol):
    with mp.workprec(precision + 16):
        cur = z
        cur_d = _lattice_distance_at(germ, cur, precision)
        h = step
        floor = mpmath.mpf(2) ** (-(precision // 2))
        for _ in range(200):
            if cur_d < tol or h < floor:
                break
            best, best_d = cur, cur_d
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    if dx == 0 and dy == 0:
                        continue
                    cand = cur + mpmath.mpc(dx * h, dy * h)
                    d = _lattice_distance_at(germ, cand, precision)
                    if d < best_d:
                        best, best_d = cand, d
            if best is cur:
                h = h / 2
            else:
                cur, cur_d = best, best_d
        return cur, cur_d


def _confirm_candidate(germ, z, precision):
    from .roots import rationalize_mpc

    for max_den in (10**6, 10**12):
        s_rat = rationalize_mpc(z, max_den)
        try:
            lifted = grading_at(germ, s_rat)
        except (OutOfRadiusError, SolverError):
            continue
        if lifted.is_integral():
            desc = _recenter_confirm(germ, s_rat)
            if desc is not None:
                return ScanCandidate(z, mpmath.mpf(0), True, desc, s_rat)
    return ScanCandidate(z, _lattice_distance_at(germ, z, precision), False, None, None)


def recenter(germ, s_star):
    """The germ translated to the exact interior point s_star."""
    germ.check_radius(s_star)
    g_star = nilpotent_exp(germ.gamma.eval(s_star))
    f_new = germ.f.apply(g_star)
    shifted = germ.gamma.shift(s_star)
    u = poly_exp(shifted) @ PolyMatrix.constant(g_star.inverse())
    gamma_new = poly_log_unipotent(u)
    new_radius = germ.radius - abs_ub(s_star)
    if not new_radius > 0:
        raise OutOfRadiusError("recentering point is too close to the boundary")
    return InteriorGerm(
        [list(g) for g in germ.h_gens],
        germ.q_form,
        {p: germ.f.step(p).apply(g_star) for p in germ.f.support()},
        gamma_new,
        new_radius,
        name=f"{germ.name}@{s_star}",
    )


def _recenter_confirm(germ, s_star):
    """Confirm an exact zero by re-running the zero locus at the new center."""
    try:
        shifted_germ = recenter(germ, s_star)
        small = shifted_germ.radius / 4
        return interior_zero_locus(shifted_germ, small)
    except (SolverError, MHSValidationError, NotAZeroAtCenterError):
        return None


# ---------------------------------------------------------------------------
# transversality
# ---------------------------------------------------------------------------


def transversality_check(germ):
    """Connection form exp(-Gamma) d/ds exp(Gamma) must map F^p to F^{p-1}."""
    expg = poly_exp(germ.gamma)
    dexp = expg.derivative()
    exp_neg = poly_exp(-germ.gamma)
    conn = exp_neg @ dexp
    violations = []
    for p in germ.f.support():
        target = germ.f.step(p - 1)
        for v in germ.f.step(p).basis:
            imgs = conn.apply_vector(v)
            top = max((q.degree for q in imgs if not q.is_zero()), default=-1)
            for k in range(top + 1):
                coefvec = tuple(q[k] for q in imgs)
                if not target.contains(coefvec):
                    violations.append((p, k))
                    break
    return TransversalityReport(not violations, tuple(violations))


class TransversalityReport:
    __slots__ = ("ok", "violations")

    def __init__(self, ok, violations):
        object.__setattr__(self, "ok", ok)
        object.__setattr__(self, "violations", violations)

    def __setattr__(self, *a):
        raise AttributeError("TransversalityReport is immutable")

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return f"TransversalityReport(ok={self.ok}, violations={self.violations})"


# ---------------------------------------------------------------------------
# defining-equation equivalence diagnostics
# ---------------------------------------------------------------------------


def defining_equation_report(germ, sample_points=None, n_points=50):
    """Equality of the zero sets of psi(ad Gamma_0)Gamma_-1 and Gamma_-1.

    Checks pointwise equivalence at exact rational sample points and the
    coefficient-level containment: the difference of the two transport
    polynomials has components only in the (-r, r-1) pieces with r >= 2.
    """
    center = grading_at(germ, qi(0))
    dpoly, g0, gm1 = transport_polynomial(
        germ, germ.frame.lift_matrix(center.lift)
    )
    if sample_points is None:
        sample_points = rational_disk_points(germ.radius, n_points)
    mismatches = []
    for s in sample_points:
        lhs_zero = dpoly.eval(s).is_zero()
        rhs_zero = gm1.eval(s).is_zero()
        if lhs_zero != rhs_zero:
            mismatches.append(s)
    coeff_ok = True
    diff = dpoly - gm1
    end = None
    if not diff.is_zero():
        from .mhs import endomorphism_bigrading

        end = endomorphism_bigrading(germ.mhs)
        deep = end.sum_pieces(lambda rr, ss: rr <= -2 and ss == -1 - rr)
        for k in range(diff.degree + 1):
            ck = diff.coeff(k)
            if ck.is_zero():
                continue
            if deep.dim == 0 or not deep.contains(mat_to_vec(ck)):
                coeff_ok = False
                break
    return DefiningEquationReport(not mismatches and coeff_ok, tuple(mismatches), coeff_ok)


class DefiningEquationReport:
    __slots__ = ("ok", "mismatches", "coefficient_check")

    def __init__(self, ok, mismatches, coefficient_check):
        object.__setattr__(self, "ok", ok)
        object.__setattr__(self, "mismatches", mismatches)
        object.__setattr__(self, "coefficient_check", coefficient_check)

    def __setattr__(self, *a):
        raise AttributeError("DefiningEquationReport is immutable")

    def __bool__(self):
        return self.ok


def rational_disk_points(radius, n_points, include_center=False):
    """Deterministic exact rational points inside the disk |s| < radius."""
    pts = []
    seen = set()
    k = 1
    while len(pts) < n_points:
        den = 3 * (k + 2)
        for a in range(-k, k + 1):
            for b in range(-k, k + 1):
                if not include_center and a == 0 and b == 0:
                    continue
                s = GaussianRational(rational(a, den), rational(b, den))
                if s in seen:
                    continue
                seen.add(s)
                if s.abs2() < radius * radius:
                    pts.append(s)
                    if len(pts) >= n_points:
                        return pts
        k += 1
    return pts

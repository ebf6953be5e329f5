"""Weight filtrations, gradings, monodromy and relative weight filtrations.

The two-step shape (W_{-2} = 0, rank one weight-0 quotient) is the shape of
every normal-function germ here; general increasing filtrations are
supported as containers, but the relative weight filtration and the
commuting grading are implemented for the two-step shape only and reject
anything else.
"""

from ._backend import rational
from .errors import (
    AmbientMismatchError,
    NonexistenceError,
    NonNilpotentError,
    SolverError,
    UnsupportedShapeError,
)
from .linalg import (
    Matrix,
    Subspace,
    commutator,
    integral_complement_vector,
    lattice_saturation_ok,
    solve_with_kernel,
    unit_vector,
    vec,
    vec_add,
    vec_is_zero,
    vec_sub,
)
from .scalars import GaussianRational, ONE, ZERO, qi


class WeightFiltration:
    """Increasing filtration W_k, stabilizing to 0 below and V above."""

    __slots__ = ("ambient_dim", "steps", "lo", "hi", "lattice_defined")

    def __init__(self, ambient_dim, steps, lattice_defined=False):
        """steps: dict k -> Subspace covering the jump range."""
        ks = sorted(steps)
        if not ks:
            raise ValueError("weight filtration needs at least one step")
        for a, b in zip(ks, ks[1:]):
            if not steps[b].contains_subspace(steps[a]):
                raise ValueError("weight filtration must be increasing")
        lo, hi = ks[0], ks[-1]
        full = Subspace.full(ambient_dim)
        if steps[hi] != full:
            raise ValueError("top step must be the full space")
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "steps", {k: steps[k] for k in ks})
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "lattice_defined", lattice_defined)

    def __setattr__(self, *a):
        raise AttributeError("WeightFiltration is immutable")

    @staticmethod
    def from_steps(ambient_dim, steps, lattice_defined=False):
        """Fill the dict so every k in [lo-1, hi] is present."""
        ks = sorted(steps)
        lo, hi = ks[0], ks[-1]
        filled = {}
        prev = Subspace.zero(ambient_dim)
        for k in range(lo - 1, hi + 1):
            if k in steps:
                prev = steps[k]
            filled[k] = prev
        if filled[lo - 1].dim != 0:
            filled[lo - 2] = Subspace.zero(ambient_dim)
        return WeightFiltration(ambient_dim, filled, lattice_defined)

    @staticmethod
    def two_step(ambient_dim, w_minus1, lattice_defined=True):
        """W_{-2} = 0 <= W_{-1} <= W_0 = V."""
        return WeightFiltration.from_steps(
            ambient_dim,
            {
                -2: Subspace.zero(ambient_dim),
                -1: w_minus1,
                0: Subspace.full(ambient_dim),
            },
            lattice_defined,
        )

    def step(self, k):
        if k in self.steps:
            return self.steps[k]
        if k < self.lo:
            return Subspace.zero(self.ambient_dim)
        return Subspace.full(self.ambient_dim)

    def support(self):
        """Weights k with Gr_k nonzero."""
        return [
            k
            for k in range(self.lo, self.hi + 1)
            if self.step(k).dim > self.step(k - 1).dim
        ]

    def graded_rank(self, k):
        return self.step(k).dim - self.step(k - 1).dim

    def is_two_step_normal_shape(self):
        """W_{-2} = 0, rank Gr_0 = 1, everything in weights {0, -1}."""
        return (
            self.step(-2).dim == 0
            and self.step(0).is_full()
            and self.graded_rank(0) == 1
        )

    def is_preserved_by(self, m, tol=None):
        return all(
            self.step(k).contains_subspace(self.step(k).apply(m), tol)
            for k in self.steps
            if self.step(k).dim > 0
        )

    def __eq__(self, other):
        if not isinstance(other, WeightFiltration):
            return NotImplemented
        if self.ambient_dim != other.ambient_dim:
            return False
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        return all(self.step(k) == other.step(k) for k in range(lo, hi + 1))

    def __repr__(self):
        parts = ", ".join(f"W_{k}: dim {s.dim}" for k, s in sorted(self.steps.items()))
        return f"WeightFiltration({parts})"


class Grading:
    """Direct sum decomposition V = (+) V_k, i.e. a semisimple endomorphism
    acting by the integer k on the piece V_k."""

    __slots__ = ("ambient_dim", "pieces",)

    def __init__(self, pieces):
        pieces = {int(k): s for k, s in pieces.items() if s.dim > 0}
        if not pieces:
            raise ValueError("grading needs a nonzero piece")
        ambient = next(iter(pieces.values())).ambient_dim
        total = 0
        for s in pieces.values():
            if s.ambient_dim != ambient:
                raise AmbientMismatchError("grading pieces in different spaces")
            total += s.dim
        if total != ambient:
            raise ValueError("grading pieces do not span (dimension count)")
        span = None
        for s in pieces.values():
            span = s if span is None else span + s
        if not span.is_full():
            raise ValueError("grading pieces do not span")
        object.__setattr__(self, "ambient_dim", ambient)
        object.__setattr__(self, "pieces", dict(sorted(pieces.items())))

    def __setattr__(self, *a):
        raise AttributeError("Grading is immutable")

    def piece(self, k):
        return self.pieces.get(k, Subspace.zero(self.ambient_dim))

    def weights(self):
        return sorted(self.pieces)

    def as_matrix(self):
        """The semisimple endomorphism with eigenvalue k on piece k."""
        cols = []
        targets = []
        for k, s in self.pieces.items():
            for v in s.basis:
                cols.append(v)
                targets.append(tuple(qi(k) * x for x in v))
        c = Matrix.from_columns(cols)
        t = Matrix.from_columns(targets)
        return t @ c.inverse()

    @staticmethod
    def from_matrix(y):
        """Recover a grading from a semisimple integer-eigenvalue matrix."""
        n = y.rows
        pieces = {}
        total = 0
        # integer eigenvalues lie in [-n_max, n_max] with n_max <= trace bound;
        # scan a safe window from the characteristic data
        for k in range(-2 * n - 2, 2 * n + 3):
            kernel = (y - Matrix.identity(n) * qi(k)).nullspace()
            if kernel:
                pieces[k] = Subspace.span(kernel, n)
                total += len(kernel)
            if total == n:
                break
        if total != n:
            raise SolverError("matrix is not semisimple with integer eigenvalues")
        return Grading(pieces)

    def grades(self, w):
        """True iff W_k = (+)_{i<=k} pieces_i for all k."""
        if self.ambient_dim != w.ambient_dim:
            return False
        for k in range(w.lo - 1, w.hi + 1):
            acc = Subspace.zero(self.ambient_dim)
            for i, s in self.pieces.items():
                if i <= k:
                    acc = acc + s
            if acc != w.step(k):
                return False
        return True

    def is_real(self):
        return all(s == s.conjugate() for s in self.pieces.values())

    def is_integral(self):
        """Preserves the standard lattice Z^n."""
        return self.as_matrix().is_integral()

    def conjugate(self):
        return Grading({k: s.conjugate() for k, s in self.pieces.items()})

    def __eq__(self, other):
        if not isinstance(other, Grading):
            return NotImplemented
        return self.pieces == other.pieces

    def __repr__(self):
        parts = ", ".join(f"{k}: dim {s.dim}" for k, s in self.pieces.items())
        return f"Grading({parts})"


class RelativeWeightData:
    """Relative weight filtration M of (N, W) plus the witness lift."""

    __slots__ = ("m", "lift")

    def __init__(self, m, lift):
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "lift", lift)

    def __setattr__(self, *a):
        raise AttributeError("RelativeWeightData is immutable")


# ---------------------------------------------------------------------------
# monodromy weight filtration
# ---------------------------------------------------------------------------


def _jordan_chains(n_mat):
    """Jordan chain bases of a nilpotent matrix, from kernels of powers.

    Returns a list of chains; chain = [top, n top, ..., n^(len-1) top].
    """
    d = n_mat.rows
    kernels = [Subspace.zero(d)]
    power = Matrix.identity(d)
    m = 0
    while True:
        power = power @ n_mat
        m += 1
        ns = power.nullspace()
        kernels.append(Subspace.span(ns, d) if ns else Subspace.zero(d))
        if kernels[-1].is_full():
            break
        if m > d:
            raise NonNilpotentError("matrix is not nilpotent")
    chains = []
    carried = []  # vectors at current level from longer chains
    for j in range(m, 0, -1):
        base = kernels[j - 1]
        for v in carried:
            base = base + Subspace.span([v], d)
        tops = base.extend_to(kernels[j]) if base != kernels[j] else []
        for t in tops:
            chain = [t]
            for _ in range(j - 1):
                chain.append(n_mat.apply(chain[-1]))
            chains.append(chain)
        carried = [n_mat.apply(v) for v in carried] + [
            n_mat.apply(t) for t in tops
        ]
        carried = [v for v in carried if not vec_is_zero(v)]
    return chains


def monodromy_weight_filtration(n_mat, center=0):
    """The unique filtration with n W_i <= W_{i-2} and power isomorphisms
    between opposite graded pieces about the center.

    Construction: Jordan chain weight assignment (top of a length-l chain
    gets center + l - 1, each step down subtracts 2).  The two defining
    axioms are re-verified on the output; the construction is not the
    contract.
    """
    if not n_mat.is_nilpotent():
        raise NonNilpotentError("monodromy filtration needs a nilpotent input")
    d = n_mat.rows
    chains = _jordan_chains(n_mat)
    weight_vectors = {}
    for chain in chains:
        size = len(chain)
        for depth, v in enumerate(chain):
            wt = center + (size - 1) - 2 * depth
            weight_vectors.setdefault(wt, []).append(v)
    if not weight_vectors:
        weight_vectors = {center: [unit_vector(i, d) for i in range(d)]}
    lo = min(weight_vectors)
    hi = max(weight_vectors)
    steps = {}
    acc = []
    for k in range(lo, hi + 1):
        acc.extend(weight_vectors.get(k, []))
        steps[k] = Subspace.span(list(acc), d) if acc else Subspace.zero(d)
    w = WeightFiltration.from_steps(d, steps)
    _verify_monodromy_axioms(n_mat, w, center)
    return w


def _verify_monodromy_axioms(n_mat, w, center):
    for k in range(w.lo, w.hi + 1):
        img = w.step(k).apply(n_mat)
        if not w.step(k - 2).contains_subspace(img):
            raise SolverError("monodromy filtration axiom n W_k <= W_{k-2} failed")
    power = Matrix.identity(n_mat.rows)
    for l in range(1, w.hi - center + 1):
        power = power @ n_mat
        top = w.step(center + l)
        bot_num = w.step(center - l)
        bot_den = w.step(center - l - 1)
        if w.graded_rank(center + l) != w.graded_rank(center - l):
            raise SolverError("opposite graded pieces have different ranks")
        image = top.apply(power) + bot_den
        if image != bot_num:
            raise SolverError("power of n is not onto the opposite graded piece")
        deep = w.step(center + l - 1).apply(power)
        if not bot_den.contains_subspace(deep):
            raise SolverError("power of n not filtered correctly")


# ---------------------------------------------------------------------------
# two-step lattice frame
# ---------------------------------------------------------------------------


class TwoStepFrame:
    """Coordinates attached to a two-step W: an integral lift of the
    generator of Gr_0 and the functional cutting it out."""

    __slots__ = ("w", "lift0", "functional", "h_basis")

    def __init__(self, w, lift0=None):
        if not w.is_two_step_normal_shape():
            raise UnsupportedShapeError(
                "weight filtration is not of two-step normal-function shape"
            )
        d = w.ambient_dim
        h = w.step(-1)
        if lift0 is None:
            rows = [[_as_int(x) for x in v] for v in h.basis]
            if not lattice_saturation_ok(rows, d):
                # fall back to the echelon basis treated as rational frame
                lift0 = _rational_complement(h, d)
            else:
                lift0 = vec(integral_complement_vector(rows, d))
        lift0 = vec(lift0)
        lam = _gr0_functional(h, lift0, d)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "lift0", lift0)
        object.__setattr__(self, "functional", lam)
        object.__setattr__(self, "h_basis", h.basis)

    def __setattr__(self, *a):
        raise AttributeError("TwoStepFrame is immutable")

    @property
    def ambient_dim(self):
        return self.w.ambient_dim

    def gr0_coefficient(self, v):
        """lambda(v): coefficient of v along the Gr_0 generator."""
        acc = ZERO
        for c, x in zip(self.functional, v):
            acc = acc + c * x
        return acc

    def lift_matrix(self, lift):
        """Endomorphism of the grading Y[lift]: 0 on <lift>, -1 on W_{-1}."""
        d = self.ambient_dim
        rows = []
        for i in range(d):
            row = []
            for j in range(d):
                val = self.functional[j] * lift[i]
                if i == j:
                    val = val - ONE
                row.append(val)
            rows.append(row)
        return Matrix(rows)

    def grading_from_lift(self, lift):
        return Grading(
            {
                0: Subspace.span([lift], self.ambient_dim),
                -1: self.w.step(-1),
            }
        )

    def lift_of_grading(self, grading):
        """Extract the lift vector of a two-step grading, normalized so the
        Gr_0 coefficient is 1."""
        p0 = grading.piece(0)
        if p0.dim != 1:
            raise UnsupportedShapeError("grading has no rank-one 0 piece")
        v = p0.basis[0]
        c = self.gr0_coefficient(v)
        if c.is_zero():
            raise SolverError("0-piece generator lies in W_{-1}")
        return tuple(x / c for x in v)


def _as_int(x):
    if x.im != 0 or x.re.denominator != 1:
        raise UnsupportedShapeError("lattice step generators must be integral")
    return int(x.re.numerator)


def _rational_complement(h, d):
    for i in range(d):
        e = unit_vector(i, d)
        if not h.contains(e):
            return e
    raise SolverError("W_{-1} is the full space")


def _gr0_functional(h, lift0, d):
    """Row functional vanishing on W_{-1} with value 1 on lift0."""
    rows = [list(v) for v in h.basis] + [list(lift0)]
    m = Matrix(rows)  # d x d, invertible iff lift0 complements W_{-1}
    try:
        inv = m.inverse()
    except SolverError:
        raise SolverError("lift does not complement W_{-1}") from None
    # lambda = last row of (m^T)^{-1}: lambda . h_i = 0, lambda . lift0 = 1
    return tuple(inv.entry(i, d - 1) for i in range(d))


# ---------------------------------------------------------------------------
# relative weight filtration (two-step shape)
# ---------------------------------------------------------------------------


def relative_weight_filtration(n_mat, w, frame=None):
    """M with M_j = L_j (j <= -1) and M_j = L_j + <v0> (j >= 0), where L is
    the centered -1 monodromy filtration of n on W_{-1} and v0 is a lift of
    the Gr_0 generator with n v0 in L_{-2}.

    Raises NonexistenceError when no valid lift exists (non-admissible).
    """
    if not n_mat.is_nilpotent():
        raise NonNilpotentError("relative weight filtration needs nilpotent n")
    frame = frame or TwoStepFrame(w)
    d = w.ambient_dim
    h = w.step(-1)
    if not h.contains_subspace(h.apply(n_mat)):
        raise SolverError("n does not preserve W_{-1}")
    if n_mat.is_zero():
        m = WeightFiltration.from_steps(
            d,
            {-2: Subspace.zero(d), -1: h, 0: Subspace.full(d)},
            w.lattice_defined,
        )
        data = RelativeWeightData(m, frame.lift0)
        _verify_relative_weight(n_mat, w, data)
        return data
    # restrict n to H in the basis of h
    hb = list(h.basis)
    if hb:
        hmat = Matrix.from_columns(hb)
        cols = []
        for v in hb:
            img = n_mat.apply(v)
            coords = solve_with_kernel(hmat, img)[0]
            cols.append(coords)
        n_h = Matrix.from_columns(cols)
        l_h = monodromy_weight_filtration(n_h, center=-1)
        # embed the filtration back into V
        l_steps = {}
        for k in range(l_h.lo, l_h.hi + 1):
            sub = l_h.step(k)
            vecs = [hmat.apply(v) for v in sub.basis]
            l_steps[k] = Subspace.span(vecs, d) if vecs else Subspace.zero(d)
    else:
        l_steps = {-1: Subspace.zero(d)}
    def l_step(k):
        ks = sorted(l_steps)
        if k < ks[0]:
            return Subspace.zero(d)
        if k > ks[-1]:
            return h
        while k not in l_steps:
            k -= 1
        return l_steps[k]

    # solve n (lift0 + x) in L_{-2} over x in H
    l2 = l_step(-2)
    columns = [n_mat.apply(v) for v in hb] + [tuple(-u for u in b) for b in l2.basis]
    rhs = tuple(-x for x in n_mat.apply(frame.lift0))
    if columns:
        sys_m = Matrix.from_columns(columns)
        try:
            sol, _ = solve_with_kernel(sys_m, rhs)
        except SolverError:
            raise NonexistenceError(
                "no lift with n(lift) inside L_{-2}: relative weight "
                "filtration does not exist"
            ) from None
        x = [ZERO] * d
        for c, v in zip(sol[: len(hb)], hb):
            if not c.is_zero():
                x = [a + c * b for a, b in zip(x, v)]
        v0 = vec_add(frame.lift0, tuple(x))
    else:
        if not vec_is_zero(rhs):
            raise NonexistenceError(
                "no lift with n(lift) inside L_{-2}: relative weight "
                "filtration does not exist"
            )
        v0 = frame.lift0
    line = Subspace.span([v0], d)
    lo = min(l_steps) if l_steps else -1
    hi = max(max(l_steps), 0)
    steps = {}
    for k in range(lo - 1, hi + 1):
        base = l_step(k)
        steps[k] = base + line if k >= 0 else base
    m = WeightFiltration.from_steps(d, steps, w.lattice_defined)
    data = RelativeWeightData(m, v0)
    _verify_relative_weight(n_mat, w, data)
    return data


def _verify_relative_weight(n_mat, w, data):
    m = data.m
    d = w.ambient_dim
    for j in range(m.lo, m.hi + 1):
        if not m.step(j - 2).contains_subspace(m.step(j).apply(n_mat)):
            raise SolverError("relative filtration fails N M_j <= M_{j-2}")
    # induced filtration on Gr_0 must jump exactly at 0
    if m.step(-1).contains(data.lift):
        raise SolverError("lift degenerates into M_{-1}")
    # induced filtration on W_{-1} must be the centered monodromy filtration
    h = w.step(-1)
    hb = list(h.basis)
    if hb:
        hmat = Matrix.from_columns(hb)
        cols = []
        for v in hb:
            coords = solve_with_kernel(hmat, n_mat.apply(v))[0]
            cols.append(coords)
        n_h = Matrix.from_columns(cols)
        l_h = monodromy_weight_filtration(n_h, center=-1)
        for k in range(l_h.lo - 1, l_h.hi + 1):
            induced = m.step(k).intersect(h)
            expected_vecs = [hmat.apply(v) for v in l_h.step(k).basis]
            expected = (
                Subspace.span(expected_vecs, d) if expected_vecs else Subspace.zero(d)
            )
            if induced != expected:
                raise SolverError(
                    "relative filtration does not induce the centered "
                    "monodromy filtration on Gr_{-1}"
                )


# ---------------------------------------------------------------------------
# the grading commuting with N and Y_M  (two-step shape)
# ---------------------------------------------------------------------------


def commuting_grading(n_mat, y_m, w, frame=None):
    """The unique grading of the two-step W commuting with both n and y_m.

    Preconditions: [y_m, n] = -2 n and y_m preserves W.  Solved as a linear
    system in the lift vector; uniqueness of the solution is asserted, and
    if y_m is real so is the output.
    """
    frame = frame or TwoStepFrame(w)
    d = w.ambient_dim
    ym_mat = y_m.as_matrix() if isinstance(y_m, Grading) else y_m
    if commutator(ym_mat, n_mat) != n_mat * qi(-2):
        raise SolverError("[y_m, n] != -2 n")
    if not w.is_preserved_by(ym_mat):
        raise SolverError("y_m does not preserve W")
    # Y[v] commutes with X iff X v = mu v where mu is the scalar X induces
    # on Gr_0 (nilpotent n: mu = 0).
    mu = frame.gr0_coefficient(ym_mat.apply(frame.lift0))
    lam_ym = [ZERO] * d
    for j in range(d):
        lam_ym[j] = frame.gr0_coefficient(ym_mat.apply(unit_vector(j, d)))
    # consistency: lambda o y_m must be mu * lambda (y_m preserves W)
    for j in range(d):
        if lam_ym[j] != mu * frame.functional[j]:
            raise SolverError("y_m does not act by a scalar on Gr_0")
    hb = list(frame.h_basis)
    shifted = ym_mat - Matrix.identity(d) * mu
    columns = []
    for v in hb:
        col = tuple(n_mat.apply(v)) + tuple(shifted.apply(v))
        columns.append(col)
    rhs = tuple(-x for x in n_mat.apply(frame.lift0)) + tuple(
        -x for x in shifted.apply(frame.lift0)
    )
    if not columns:
        v0 = frame.lift0
    else:
        sys_m = Matrix.from_columns(columns)
        try:
            sol, kernel = solve_with_kernel(sys_m, rhs)
        except SolverError:
            raise SolverError(
                "no grading commutes with both n and y_m (hypothesis violated)"
            ) from None
        if kernel:
            raise SolverError("commuting grading is not unique (hypothesis violated)")
        x = [ZERO] * d
        for c, v in zip(sol, hb):
            if not c.is_zero():
                x = [a + c * b for a, b in zip(x, v)]
        v0 = vec_add(frame.lift0, tuple(x))
    out = frame.grading_from_lift(v0)
    y_m_real = (
        y_m.is_real() if isinstance(y_m, Grading) else ym_mat.is_real()
    )
    if y_m_real and n_mat.is_real() and not out.is_real():
        raise SolverError("real inputs produced a non-real commuting grading")
    return out

"""Mixed Hodge structures: validation, bigradings, gradings, chart
subalgebras and coordinates, real (delta) splittings, polarization checks.

The bigrading is computed by the standard explicit intersection formula and
then re-verified against its three defining properties; the properties, not
the formula, are the contract.
"""

from .errors import (
    AmbientMismatchError,
    ExactnessError,
    MHSValidationError,
    OutOfChartError,
    SolverError,
)
from .linalg import (
    EXACT,
    Matrix,
    Subspace,
    mat_to_vec,
    nilpotent_exp,
    unipotent_log,
    unit_vector,
    vec,
    vec_is_zero,
    vec_to_mat,
)
from .filtrations import Grading, WeightFiltration
from .scalars import GaussianRational, I as IMAG, ONE, ZERO, qi


class HodgeFiltration:
    """Decreasing filtration F^p with finite support.

    Stored steps are the jumps; queries below the smallest stored index
    return the full space, queries above the largest return zero, queries
    between stored indices return the next stored step above.
    """

    __slots__ = ("ambient_dim", "steps", "lo", "hi")

    def __init__(self, ambient_dim, steps):
        ks = sorted(steps)
        if not ks:
            raise ValueError("Hodge filtration needs at least one step")
        for a, b in zip(ks, ks[1:]):
            if not steps[a].contains_subspace(steps[b]):
                raise ValueError("Hodge filtration must be decreasing")
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "steps", {k: steps[k] for k in ks})
        object.__setattr__(self, "lo", ks[0])
        object.__setattr__(self, "hi", ks[-1])

    def __setattr__(self, *a):
        raise AttributeError("HodgeFiltration is immutable")

    def step(self, p):
        if p <= self.lo:
            if p == self.lo:
                return self.steps[self.lo]
            return Subspace.full(self.ambient_dim)
        if p > self.hi:
            return Subspace.zero(self.ambient_dim)
        k = p
        while k not in self.steps:
            k += 1
        return self.steps[k]

    def support(self):
        """Indices p where F^p jumps (F^p != F^{p+1})."""
        out = []
        for p in range(self.lo - 1, self.hi + 1):
            if self.step(p).dim != self.step(p + 1).dim:
                out.append(p)
        return out

    def apply(self, g):
        return HodgeFiltration(
            self.ambient_dim, {p: s.apply(g) for p, s in self.steps.items()}
        )

    def conjugate(self):
        return HodgeFiltration(
            self.ambient_dim, {p: s.conjugate() for p, s in self.steps.items()}
        )

    def __eq__(self, other):
        if not isinstance(other, HodgeFiltration):
            return NotImplemented
        if self.ambient_dim != other.ambient_dim:
            return False
        lo = min(self.lo, other.lo) - 1
        hi = max(self.hi, other.hi) + 1
        return all(self.step(p) == other.step(p) for p in range(lo, hi + 1))

    def __repr__(self):
        parts = ", ".join(f"F^{p}: dim {s.dim}" for p, s in self.steps.items())
        return f"HodgeFiltration({parts})"


class MixedHodgeStructure:
    """A pair (F, W); validity means F induces a pure structure of weight k
    on every graded quotient of W."""

    __slots__ = ("f", "w")

    def __init__(self, f, w):
        if f.ambient_dim != w.ambient_dim:
            raise AmbientMismatchError("F and W ambient dimensions differ")
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "w", w)

    def __setattr__(self, *a):
        raise AttributeError("MixedHodgeStructure is immutable")

    @property
    def ambient_dim(self):
        return self.f.ambient_dim

    def validate(self):
        return validate_mhs(self.f, self.w)

    def require_valid(self):
        report = self.validate()
        if not report.ok:
            raise MHSValidationError(
                f"not a mixed Hodge structure; first violation at {report.first_violation}",
                report,
            )
        return self


class ValidationReport:
    __slots__ = ("ok", "first_violation", "details")

    def __init__(self, ok, first_violation=None, details=""):
        object.__setattr__(self, "ok", ok)
        object.__setattr__(self, "first_violation", first_violation)
        object.__setattr__(self, "details", details)

    def __setattr__(self, *a):
        raise AttributeError("ValidationReport is immutable")

    def __bool__(self):
        return self.ok

    def __repr__(self):
        if self.ok:
            return "ValidationReport(pass)"
        return f"ValidationReport(fail at {self.first_violation}: {self.details})"


def validate_mhs(f, w):
    """Purity of the induced filtration on every graded piece of W.

    Returns a report; the first violated (k, p) pair is recorded on failure.
    """
    if f.ambient_dim != w.ambient_dim:
        raise AmbientMismatchError("F and W ambient dimensions differ")
    p_lo, p_hi = f.lo - 1, f.hi + 1
    for k in w.support():
        wk = w.step(k)
        wk1 = w.step(k - 1)
        for p in range(p_lo, p_hi + 1):
            a = f.step(p).intersect(wk)
            b = f.step(k - p + 1).conjugate().intersect(wk)
            if (a + b + wk1) != wk:
                return ValidationReport(
                    False, (k, p), "graded piece not spanned by F and conj(F)"
                )
            if (a + wk1).intersect(b + wk1) != wk1:
                return ValidationReport(
                    False, (k, p), "F and conj(F) overlap on the graded piece"
                )
    return ValidationReport(True)


# ---------------------------------------------------------------------------
# the bigrading
# ---------------------------------------------------------------------------


class Bigrading:
    """Finite map (p, q) -> subspace decomposing the ambient space."""

    __slots__ = ("ambient_dim", "pieces")

    def __init__(self, pieces):
        pieces = {k: s for k, s in pieces.items() if s.dim > 0}
        if not pieces:
            raise ValueError("bigrading needs a nonzero piece")
        ambient = next(iter(pieces.values())).ambient_dim
        object.__setattr__(self, "ambient_dim", ambient)
        object.__setattr__(
            self,
            "pieces",
            dict(sorted(pieces.items(), key=lambda kv: (-kv[0][0], -kv[0][1]))),
        )

    def __setattr__(self, *a):
        raise AttributeError("Bigrading is immutable")

    def piece(self, p, q):
        return self.pieces.get((p, q), Subspace.zero(self.ambient_dim))

    def keys(self):
        return list(self.pieces)

    def weight_piece(self, k):
        acc = Subspace.zero(self.ambient_dim)
        for (p, q), s in self.pieces.items():
            if p + q == k:
                acc = acc + s
        return acc

    def level_piece(self, p0):
        acc = Subspace.zero(self.ambient_dim)
        for (p, q), s in self.pieces.items():
            if p == p0:
                acc = acc + s
        return acc

    def adapted_columns(self):
        """Basis columns grouped by piece, with their (p, q) labels."""
        cols, labels = [], []
        for key, s in self.pieces.items():
            for v in s.basis:
                cols.append(v)
                labels.append(key)
        return cols, labels

    def adapted_matrix(self):
        cols, _ = self.adapted_columns()
        return Matrix.from_columns(cols)

    def grading(self):
        pieces = {}
        for (p, q), s in self.pieces.items():
            k = p + q
            pieces[k] = pieces.get(k, Subspace.zero(self.ambient_dim)) + s
        return Grading(pieces)

    def is_conjugation_symmetric(self):
        return all(
            self.piece(p, q).conjugate() == self.piece(q, p)
            for (p, q) in self.pieces
        )

    def apply(self, g):
        return Bigrading({k: s.apply(g) for k, s in self.pieces.items()})

    def __eq__(self, other):
        if not isinstance(other, Bigrading):
            return NotImplemented
        return self.pieces == other.pieces

    def __repr__(self):
        parts = ", ".join(f"I^{k}: dim {s.dim}" for k, s in self.pieces.items())
        return f"Bigrading({parts})"


def deligne_bigrading(m, verify=True):
    """I^{p,q} = F^p /\\ W_{p+q} /\\ (conj F^q /\\ W_{p+q} + sum_j conj F^{q-j} /\\ W_{p+q-j-1}).

    The output is re-verified: the pieces are a direct sum decomposition,
    F^p and W_k are recovered by the two sum rules, and conjugation flips
    (p, q) modulo strictly smaller pieces.
    """
    if isinstance(m, tuple):
        m = MixedHodgeStructure(*m)
    m.require_valid()
    f, w = m.f, m.w
    d = m.ambient_dim
    p_lo, p_hi = f.lo - 1, f.hi
    pieces = {}
    total = 0
    for p in range(p_lo, p_hi + 1):
        for q in range(p_lo, p_hi + 1):
            k = p + q
            if k < w.lo - 1 or k > w.hi:
                continue
            wk = w.step(k)
            if wk.dim == 0:
                continue
            main = f.step(q).conjugate().intersect(wk)
            corr = main
            j = 1
            while k - j - 1 >= w.lo - 1:
                wj = w.step(k - j - 1)
                if wj.dim == 0:
                    break
                corr = corr + f.step(q - j).conjugate().intersect(wj)
                j += 1
            piece = f.step(p).intersect(wk).intersect(corr)
            if piece.dim > 0:
                pieces[(p, q)] = piece
                total += piece.dim
    big = Bigrading(pieces)
    if verify:
        _verify_bigrading(big, m, total)
    return big


def _verify_bigrading(big, m, total=None):
    f, w = m.f, m.w
    d = m.ambient_dim
    if total is None:
        total = sum(s.dim for s in big.pieces.values())
    if total != d:
        raise SolverError("bigrading pieces do not sum to the ambient dimension")
    span = Subspace.zero(d)
    for s in big.pieces.values():
        span = span + s
    if not span.is_full():
        raise SolverError("bigrading pieces do not span")
    # property (1)
    for p in range(f.lo - 1, f.hi + 1):
        acc = Subspace.zero(d)
        for (a, b), s in big.pieces.items():
            if a >= p:
                acc = acc + s
        if acc != f.step(p):
            raise SolverError(f"bigrading does not recover F^{p}")
    # property (2)
    for k in range(w.lo - 1, w.hi + 1):
        acc = Subspace.zero(d)
        for (a, b), s in big.pieces.items():
            if a + b <= k:
                acc = acc + s
        if acc != w.step(k):
            raise SolverError(f"bigrading does not recover W_{k}")
    # property (3)
    for (p, q), s in big.pieces.items():
        lower = Subspace.zero(d)
        for (r, t), u in big.pieces.items():
            if r < q and t < p:
                lower = lower + u
        lhs = s.conjugate() + lower
        rhs = big.piece(q, p) + lower
        if lhs != rhs:
            raise SolverError(
                f"conjugation symmetry mod lower pieces fails at ({p},{q})"
            )


def deligne_grading(m, verify=True):
    """Grading acting by p + q on I^{p,q}; grades W and preserves F."""
    big = deligne_bigrading(m, verify=verify)
    g = big.grading()
    if verify:
        if not g.grades(m.w):
            raise SolverError("Deligne grading does not grade W")
    return g


# ---------------------------------------------------------------------------
# induced structure on endomorphisms
# ---------------------------------------------------------------------------


class EndBigrading:
    """Bigrading of End(V) induced by a bigrading of V.

    Endomorphisms are flattened row-major to vectors of length dim^2; the
    (r, s) piece consists of the maps sending each I^{p,q} into
    I^{p+r, q+s}.
    """

    __slots__ = ("dim", "pieces", "base")

    def __init__(self, dim, pieces, base):
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "base", base)

    def __setattr__(self, *a):
        raise AttributeError("EndBigrading is immutable")

    def piece(self, r, s):
        return self.pieces.get((r, s), Subspace.zero(self.dim * self.dim))

    def keys(self):
        return list(self.pieces)

    def matrix_basis(self, r, s):
        return [vec_to_mat(v, self.dim) for v in self.piece(r, s).basis]

    def sum_pieces(self, predicate):
        acc = Subspace.zero(self.dim * self.dim)
        for (r, s), sub in self.pieces.items():
            if predicate(r, s):
                acc = acc + sub
        return acc

    def component(self, x, r, s):
        """The (r, s) block component of the matrix x."""
        cols, labels = self.base.adapted_columns()
        c = Matrix.from_columns(cols)
        xa = c.inverse() @ x @ c
        keep = Matrix.zero(self.dim)
        entries = [list(row) for row in keep.entries]
        for i, li in enumerate(labels):
            for j, lj in enumerate(labels):
                if li[0] - lj[0] == r and li[1] - lj[1] == s:
                    entries[i][j] = xa.entry(i, j)
        return c @ Matrix(entries) @ c.inverse()


def endomorphism_bigrading(m):
    """Deligne bigrading of End(V) for the induced structure."""
    big = deligne_bigrading(m)
    d = m.ambient_dim
    cols, labels = big.adapted_columns()
    c = Matrix.from_columns(cols)
    cinv = c.inverse()
    pieces = {}
    for i, li in enumerate(labels):
        for j, lj in enumerate(labels):
            r = li[0] - lj[0]
            s = li[1] - lj[1]
            e = Matrix.elementary(i, j, d)
            x = c @ e @ cinv
            pieces.setdefault((r, s), []).append(mat_to_vec(x))
    subs = {
        key: Subspace.span(vs, d * d) for key, vs in pieces.items()
    }
    return EndBigrading(d, subs, big)


def w_preserving_endomorphisms(w):
    """Subspace of End(V) (flattened) preserving every step of W."""
    d = w.ambient_dim
    adapted = []
    current = Subspace.zero(d)
    weights = []
    for k in range(w.lo, w.hi + 1):
        nxt = w.step(k)
        if nxt.dim > current.dim:
            ext = current.extend_to(nxt)
            adapted.extend(ext)
            weights.extend([k] * len(ext))
            current = nxt
    c = Matrix.from_columns(adapted)
    cinv = c.inverse()
    vecs = []
    for i in range(d):
        for j in range(d):
            if weights[i] <= weights[j]:
                vecs.append(mat_to_vec(c @ Matrix.elementary(i, j, d) @ cinv))
    return Subspace.span(vecs, d * d)


def chart_subalgebra(m, flavor):
    """Nilpotent complement of the F-stabilizer.

    interior: (+) over p < 0, p + q <= 0 of the End pieces -- complement of
    the stabilizer inside the W-preserving endomorphisms.
    puncture: (+) over r < 0 of the End pieces -- complement of the
    stabilizer inside all endomorphisms.
    """
    if flavor not in ("interior", "puncture"):
        raise ValueError("flavor must be 'interior' or 'puncture'")
    end = endomorphism_bigrading(m)
    d = end.dim
    if flavor == "interior":
        q = end.sum_pieces(lambda r, s: r < 0 and r + s <= 0)
        stab = end.sum_pieces(lambda r, s: r >= 0 and r + s <= 0)
        total = w_preserving_endomorphisms(m.w)
    else:
        q = end.sum_pieces(lambda r, s: r < 0)
        stab = end.sum_pieces(lambda r, s: r >= 0)
        total = Subspace.full(d * d)
    if q.dim == 0:
        return q
    # verified nilpotent: every basis element strictly lowers the level
    for v in q.basis:
        x = vec_to_mat(v, d)
        if not x.is_nilpotent():
            raise SolverError("chart subalgebra contains a non-nilpotent element")
    if q.intersect(stab).dim != 0 or (q + stab) != total:
        raise SolverError("chart subalgebra is not a complement of the stabilizer")
    return q


# ---------------------------------------------------------------------------
# chart coordinates
# ---------------------------------------------------------------------------


def chart_coordinate(f_target, base, q_sub):
    """The unique Gamma in the chart subalgebra with exp(Gamma).F = target.

    Graded successive approximation over the level filtration: the depth-d
    discrepancy between the current approximation and the target is read off
    linearly in adapted coordinates and corrected; the loop terminates in at
    most (level spread) steps and the round trip is re-verified exactly.
    """
    if isinstance(base, tuple):
        base = MixedHodgeStructure(*base)
    big = deligne_bigrading(base)
    d = base.ambient_dim
    cols, labels = big.adapted_columns()
    levels = [p for (p, _q) in labels]
    c = Matrix.from_columns(cols)
    cinv = c.inverse()
    level_set = sorted(set(levels), reverse=True)
    max_depth = level_set[0] - level_set[-1] if len(level_set) > 1 else 0

    # adapted coordinates of the target steps, one matrix per level
    def adapted_step(filt, p):
        s = filt.step(p)
        if s.dim == 0:
            return None
        return [cinv.apply(v) for v in s.basis]

    current = {
        p: adapted_step(f_target, p) for p in level_set
    }
    base_dims = {p: base.f.step(p).dim for p in level_set}
    for p in level_set:
        got = 0 if current[p] is None else len(current[p])
        if got != base_dims[p]:
            raise OutOfChartError(
                f"target F^{p} has dimension {got}, expected {base_dims[p]}"
            )

    corrections = []
    for depth in range(1, max_depth + 1):
        xi = [[ZERO] * d for _ in range(d)]
        for a in level_set:
            colsmat = current[a]
            if not colsmat:
                continue
            fdim = base_dims[a]
            top_idx = [i for i in range(d) if levels[i] >= a]
            if len(top_idx) != fdim:
                raise OutOfChartError("level dimensions inconsistent with chart")
            m_mat = Matrix.from_columns(colsmat)
            top = Matrix([[m_mat.entry(i, j) for j in range(fdim)] for i in top_idx])
            try:
                top_inv = top.inverse()
            except SolverError:
                raise OutOfChartError(
                    "target filtration does not project onto the base levels"
                ) from None
            norm = m_mat @ top_inv
            for col_pos, i_coord in enumerate(top_idx):
                if levels[i_coord] != a:
                    continue  # read each coordinate at its own tightest level
                for row in range(d):
                    lev = levels[row]
                    if lev >= a:
                        continue
                    val = norm.entry(row, col_pos)
                    drop = a - lev
                    if drop < depth:
                        if not val.is_zero():
                            raise OutOfChartError(
                                "previous depths left a nonzero residue"
                            )
                    elif drop == depth:
                        xi[row][i_coord] = val
        xi_mat = Matrix(xi)
        if xi_mat.is_zero():
            continue
        x_std = c @ xi_mat @ cinv
        if not q_sub.contains(mat_to_vec(x_std)):
            raise OutOfChartError(
                f"depth-{depth} correction is not in the chart subalgebra"
            )
        corrections.append(x_std)
        shrink = nilpotent_exp(-xi_mat)
        current = {
            p: None if current[p] is None else [shrink.apply(v) for v in current[p]]
            for p in level_set
        }

    g = Matrix.identity(d)
    for x in corrections:
        g = g @ nilpotent_exp(x)
    # exact round trip
    for p in level_set:
        if base.f.step(p).apply(g) != f_target.step(p):
            raise OutOfChartError("round trip failed: target not in chart image")
    gamma = unipotent_log(g)
    if not q_sub.contains(mat_to_vec(gamma)):
        raise OutOfChartError("chart coordinate left the chart subalgebra")
    return gamma


# ---------------------------------------------------------------------------
# real (delta) splitting
# ---------------------------------------------------------------------------


class SplittingData:
    """delta (real, in Lambda of the split structure) and the split F."""

    __slots__ = ("delta", "f_hat")

    def __init__(self, delta, f_hat):
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "f_hat", f_hat)

    def __setattr__(self, *a):
        raise AttributeError("SplittingData is immutable")


def deligne_splitting(m):
    """Unique real delta with exp(-i delta).F conjugation-split.

    Solved by depth induction on the comparison matrix between the adapted
    basis and its conjugate: at each level drop the defect determines the
    unique correction block.  All stated properties (delta real, delta in
    Lambda of the output, exact conjugation symmetry of the output) are
    re-verified before returning.
    """
    if isinstance(m, tuple):
        m = MixedHodgeStructure(*m)
    big = deligne_bigrading(m)
    d = m.ambient_dim
    cols, labels = big.adapted_columns()
    c = Matrix.from_columns(cols)
    cinv = c.inverse()
    s_mat = cinv @ c.conjugate()
    idx_of = {}
    for i, key in enumerate(labels):
        idx_of.setdefault(key, []).append(i)
    keys = list(big.pieces)
    level = {k: k[0] + k[1] for k in keys}
    max_drop = max(level.values()) - min(level.values()) if len(keys) > 1 else 0

    def block(mat, target, source):
        return [
            [mat.entry(i, j) for j in idx_of[source]] for i in idx_of[target]
        ]

    # level-preserving part must sit exactly on the transposed positions
    for src in keys:
        for tgt in keys:
            if level[tgt] == level[src] and tgt != (src[1], src[0]):
                if any(
                    not x.is_zero() for row in block(s_mat, tgt, src) for x in row
                ):
                    raise SolverError(
                        "conjugation comparison has an off-diagonal level block"
                    )

    delta_adapted = Matrix.zero(d)
    half_i = IMAG * qi("1/2")
    for drop in range(1, max_drop + 1):
        cur = nilpotent_exp(delta_adapted * (IMAG * qi(2))) @ s_mat
        patch = [[ZERO] * d for _ in range(d)]
        found = False
        for src in keys:
            diag_src = (src[1], src[0])
            if diag_src not in idx_of:
                raise SolverError("bigrading is not dimension-symmetric")
            diag = Matrix(block(s_mat, diag_src, src))
            diag_inv = diag.inverse()
            for tgt in keys:
                if level[src] - level[tgt] != drop:
                    continue
                j_blk = Matrix(block(cur, tgt, src))
                if j_blk.is_zero():
                    continue
                found = True
                corr = (j_blk @ diag_inv) * half_i
                for bi, i in enumerate(idx_of[tgt]):
                    for bj, j in enumerate(idx_of[diag_src]):
                        patch[i][j] = patch[i][j] + corr.entry(bi, bj)
        if found:
            delta_adapted = delta_adapted + Matrix(patch)

    final = nilpotent_exp(delta_adapted * (IMAG * qi(2))) @ s_mat
    for src in keys:
        for tgt in keys:
            if tgt != (src[1], src[0]):
                if any(not x.is_zero() for row in block(final, tgt, src) for x in row):
                    raise SolverError("splitting induction failed to clear a block")

    delta = c @ delta_adapted @ cinv
    if not delta.is_real():
        raise SolverError("computed splitting correction is not real")
    exp_neg = nilpotent_exp(delta * (-IMAG))
    f_hat = m.f.apply(exp_neg)
    split = MixedHodgeStructure(f_hat, m.w)
    split_big = deligne_bigrading(split)
    if not split_big.is_conjugation_symmetric():
        raise SolverError("split structure is not conjugation symmetric")
    end = endomorphism_bigrading(split)
    lam = end.sum_pieces(lambda r, s: r < 0 and s < 0)
    if delta.is_zero():
        pass
    elif lam.dim == 0 or not lam.contains(mat_to_vec(delta)):
        raise SolverError("delta does not lie in the negative-negative algebra")
    # round trip: exp(i delta) recovers F
    if f_hat.apply(nilpotent_exp(delta * IMAG)) != m.f:
        raise SolverError("exp(i delta) does not recover the input filtration")
    return SplittingData(delta, f_hat)


def lambda_subalgebra(m):
    """(+) over r < 0, s < 0 of the End pieces of (F, W)."""
    end = endomorphism_bigrading(m)
    return end.sum_pieces(lambda r, s: r < 0 and s < 0)


# ---------------------------------------------------------------------------
# polarizations and group elements
# ---------------------------------------------------------------------------


class PolarizationForm:
    """Integral skew form on the weight -1 graded piece.

    sign convention: h(u, v) = i * Q(u, conj v) is positive definite on the
    (0, -1) part of a polarized pure structure of weight -1.
    """

    SIGN_CONVENTION = "i*Q(u, conj v) > 0 on I^{0,-1}"

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        if matrix.rows != matrix.cols:
            raise ValueError("polarization matrix must be square")
        if not matrix.is_integral():
            raise ValueError("polarization matrix must be integral")
        if matrix.transpose() != -matrix:
            raise ValueError("polarization matrix must be skew-symmetric")
        if matrix.det().is_zero():
            raise ValueError("polarization matrix must be nondegenerate")
        object.__setattr__(self, "matrix", matrix)

    def __setattr__(self, *a):
        raise AttributeError("PolarizationForm is immutable")

    @property
    def dim(self):
        return self.matrix.rows

    def pair(self, u, v):
        """Q(u, v)."""
        acc = ZERO
        mv = self.matrix.apply(v)
        for a, b in zip(u, mv):
            acc = acc + a * b
        return acc

    def infinitesimal_isometry(self, x):
        """Q(x u, v) + Q(u, x v) = 0 for all u, v."""
        return (x.transpose() @ self.matrix + self.matrix @ x).is_zero()

    def isometry(self, g):
        return (g.transpose() @ self.matrix @ g) == self.matrix


def validate_polarization(f0_h, q_form, report_values=False):
    """Check Q(F^0, F^0) = 0 and positivity of h(u,v) = i Q(u, conj v) on F^0.

    f0_h: the (0,-1) subspace of the pure weight -1 structure, in the
    coordinates of the polarization matrix.  Exact positivity is decided by
    leading principal minors.
    """
    if f0_h.ambient_dim != q_form.dim:
        raise AmbientMismatchError("filtration/polarization dimension mismatch")
    if 2 * f0_h.dim != q_form.dim:
        return ValidationReport(
            False, None, "F^0 is not half-dimensional on the weight -1 piece"
        )
    basis = list(f0_h.basis)
    g = len(basis)
    for u in basis:
        for v in basis:
            if not q_form.pair(u, v).is_zero():
                return ValidationReport(False, None, "F^0 is not Q-isotropic")
    h_entries = [
        [IMAG * q_form.pair(basis[a], tuple(x.conjugate() for x in basis[b])) for b in range(g)]
        for a in range(g)
    ]
    h = Matrix(h_entries)
    for a in range(g):
        for b in range(g):
            if h.entry(a, b) != h.entry(b, a).conjugate():
                return ValidationReport(False, None, "h form is not Hermitian")
    for k in range(1, g + 1):
        minor = Matrix([[h.entry(i, j) for j in range(k)] for i in range(k)]).det()
        if minor.im != 0 or not minor.re > 0:
            detail = f"h form not positive (minor {k} = {minor})"
            if report_values and g == 1:
                detail += f"; h-value {h.entry(0, 0)}"
            return ValidationReport(False, None, detail)
    detail = ""
    if report_values and g == 1:
        detail = f"h-value {h.entry(0, 0)}"
    return ValidationReport(True, None, detail)


class GroupElement:
    """Automorphism preserving W and inducing graded isometries."""

    __slots__ = ("matrix", "real", "integral")

    def __init__(self, matrix):
        if matrix.rows != matrix.cols:
            raise ValueError("group element must be square")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "real", matrix.is_real())
        object.__setattr__(
            self, "integral", matrix.kind == EXACT and matrix.is_integral()
        )

    def __setattr__(self, *a):
        raise AttributeError("GroupElement is immutable")

    def preserves(self, w, tol=None):
        return w.is_preserved_by(self.matrix, tol)

    def is_graded_isometry(self, w, q_form, frame):
        """Preserves W, acts by 1 on Gr_0 and by a Q-isometry on Gr_{-1}."""
        if not self.preserves(w):
            return False
        lam = frame.gr0_coefficient(self.matrix.apply(frame.lift0))
        if lam != ONE:
            return False
        h = w.step(-1)
        hmat = Matrix.from_columns(list(h.basis))
        cols = []
        from .linalg import solve_with_kernel

        for v in h.basis:
            cols.append(solve_with_kernel(hmat, self.matrix.apply(v))[0])
        g_h = Matrix.from_columns(cols)
        return q_form.isometry(g_h)

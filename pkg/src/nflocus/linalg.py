"""Matrices and subspaces over the Gaussian rationals, plus numeric twins.

Exact mode is the default: entries are GaussianRational, echelon forms are
canonical (equal subspaces have identical representations), and every
operation is a pure function on immutable values.  Numeric mode carries an
explicit binary precision; rank decisions there use a relative tolerance of
2**(-precision/2).
"""

import math

import mpmath
from mpmath import mp

from .errors import (
    AmbientMismatchError,
    ExactnessError,
    NonNilpotentError,
    NonUnipotentError,
    SolverError,
)
from .scalars import GaussianRational, NumericComplex, ONE, ZERO, qi
from ._backend import rational

EXACT = "exact"
NUMERIC = "numeric"


def _coerce_entry(x, precision=None):
    if isinstance(x, (GaussianRational, NumericComplex)):
        return x
    if isinstance(x, (mpmath.mpf, mpmath.mpc, float)):
        if precision is None:
            precision = mp.prec
        return NumericComplex(
            getattr(x, "real", x), getattr(x, "imag", 0), precision
        )
    return qi(x)


def _kind_of(entry):
    return EXACT if isinstance(entry, GaussianRational) else NUMERIC


# ---------------------------------------------------------------------------
# vectors (plain tuples of scalars)
# ---------------------------------------------------------------------------


def vec(entries, precision=None):
    return tuple(_coerce_entry(x, precision) for x in entries)


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, u):
    return tuple(c * a for a in u)


def vec_conj(u):
    return tuple(a.conjugate() for a in u)


def vec_is_zero(u, tol=None):
    for a in u:
        if isinstance(a, NumericComplex):
            if not a.is_zero(tol):
                return False
        elif not a.is_zero():
            return False
    return True


def vec_norm2_sq(u):
    """Exact squared 2-norm of an exact vector (rational)."""
    s = rational(0)
    for a in u:
        s = s + a.abs2()
    return s


def unit_vector(i, n):
    return tuple(ONE if j == i else ZERO for j in range(n))


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


class Matrix:
    """Immutable dense matrix, exact or numeric (never mixed)."""

    __slots__ = ("entries", "rows", "cols", "kind", "precision")

    def __init__(self, entries, precision=None):
        rows = tuple(
            tuple(_coerce_entry(x, precision) for x in row) for row in entries
        )
        if not rows or not rows[0]:
            raise ValueError("matrix must have at least one row and column")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        kind = _kind_of(rows[0][0])
        for r in rows:
            for x in r:
                if _kind_of(x) != kind:
                    raise ExactnessError("mixed exact/numeric matrix entries")
        prec = None
        if kind == NUMERIC:
            prec = min(x.precision for r in rows for x in r)
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", ncols)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "precision", prec)

    def __setattr__(self, *a):
        raise AttributeError("Matrix is immutable")

    # -- constructors --------------------------------------------------

    @staticmethod
    def identity(n):
        return Matrix(
            [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
        )

    @staticmethod
    def zero(r, c=None):
        c = r if c is None else c
        return Matrix([[ZERO] * c for _ in range(r)])

    @staticmethod
    def elementary(i, j, n, scale=ONE):
        """E(i<-j): sends e_j to scale*e_i, every other basis vector to 0."""
        m = [[ZERO] * n for _ in range(n)]
        m[i][j] = qi(scale)
        return Matrix(m)

    @staticmethod
    def from_columns(cols):
        n = len(cols[0])
        return Matrix([[cols[j][i] for j in range(len(cols))] for i in range(n)])

    @staticmethod
    def diagonal(values):
        n = len(values)
        return Matrix(
            [[qi(values[i]) if i == j else ZERO for j in range(n)] for i in range(n)]
        )

    # -- access ----------------------------------------------------------

    def entry(self, i, j):
        return self.entries[i][j]

    def row(self, i):
        return self.entries[i]

    def col(self, j):
        return tuple(self.entries[i][j] for i in range(self.rows))

    def columns(self):
        return [self.col(j) for j in range(self.cols)]

    # -- arithmetic --------------------------------------------------------

    def _require_same_shape(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise AmbientMismatchError("matrix shape mismatch")

    def __add__(self, other):
        self._require_same_shape(other)
        return Matrix(
            [
                [self.entries[i][j] + other.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def __sub__(self, other):
        self._require_same_shape(other)
        return Matrix(
            [
                [self.entries[i][j] - other.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def __neg__(self):
        return Matrix([[-x for x in row] for row in self.entries])

    def __mul__(self, scalar):
        c = scalar if isinstance(scalar, (GaussianRational, NumericComplex)) else qi(scalar)
        return Matrix([[c * x for x in row] for row in self.entries])

    __rmul__ = __mul__

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise AmbientMismatchError("matmul shape mismatch")
        bt = list(zip(*other.entries))
        out = []
        for row in self.entries:
            out.append(
                [
                    _dot_plain(row, bcol)
                    for bcol in bt
                ]
            )
        return Matrix(out)

    def apply(self, v):
        if len(v) != self.cols:
            raise AmbientMismatchError("matrix/vector mismatch")
        return tuple(_dot_plain(row, v) for row in self.entries)

    def transpose(self):
        return Matrix(list(zip(*self.entries)))

    def conjugate(self):
        return Matrix([[x.conjugate() for x in row] for row in self.entries])

    def trace(self):
        t = self.entries[0][0]
        for i in range(1, min(self.rows, self.cols)):
            t = t + self.entries[i][i]
        return t

    def __pow__(self, k):
        if self.rows != self.cols:
            raise AmbientMismatchError("power of non-square matrix")
        result = (
            Matrix.identity(self.rows)
            if self.kind == EXACT
            else _numeric_identity(self.rows, self.precision)
        )
        for _ in range(k):
            result = result @ self
        return result

    def is_zero(self, tol=None):
        for row in self.entries:
            for x in row:
                if isinstance(x, NumericComplex):
                    if not x.is_zero(tol):
                        return False
                elif not x.is_zero():
                    return False
        return True

    def is_real(self):
        return all(
            (x.im == 0) for row in self.entries for x in row
        )

    def is_integral(self):
        self._require_exact()
        return all(x.is_integer() for row in self.entries for x in row)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        body = "; ".join(
            " ".join(str(x) for x in row) for row in self.entries
        )
        return f"Matrix[{body}]"

    # -- exact-only structure ------------------------------------------------

    def _require_exact(self):
        if self.kind != EXACT:
            raise ExactnessError("operation requires an exact matrix")

    def rank(self):
        if self.kind == EXACT:
            _, pivots = rref([list(r) for r in self.entries])
            return len(pivots)
        r, pivots = _numeric_rref(
            [list(r) for r in self.entries], self.precision
        )
        return len(pivots)

    def det(self):
        self._require_exact()
        if self.rows != self.cols:
            raise AmbientMismatchError("determinant of non-square matrix")
        a = [list(r) for r in self.entries]
        n = self.rows
        det = ONE
        for c in range(n):
            piv = None
            for r in range(c, n):
                if not a[r][c].is_zero():
                    piv = r
                    break
            if piv is None:
                return ZERO
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                det = -det
            det = det * a[c][c]
            inv = ONE / a[c][c]
            for r in range(c + 1, n):
                f = a[r][c] * inv
                if not f.is_zero():
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return det

    def inverse(self):
        if self.rows != self.cols:
            raise AmbientMismatchError("inverse of non-square matrix")
        if self.kind == NUMERIC:
            return _numeric_inverse(self)
        n = self.rows
        aug = [
            list(self.entries[i]) + [ONE if i == j else ZERO for j in range(n)]
            for i in range(n)
        ]
        reduced, pivots = rref(aug)
        if pivots != list(range(n)):
            raise SolverError("matrix is singular")
        return Matrix([row[n:] for row in reduced])

    def nullspace(self):
        """Basis vectors (tuples) of the right kernel."""
        self._require_exact()
        a = [list(r) for r in self.entries]
        reduced, pivots = rref(a)
        free = [j for j in range(self.cols) if j not in pivots]
        basis = []
        for f in free:
            v = [ZERO] * self.cols
            v[f] = ONE
            for r, p in enumerate(pivots):
                v[p] = -reduced[r][f]
            basis.append(tuple(v))
        return basis

    def solve(self, b):
        """One exact solution of self @ x = b, or raise SolverError."""
        self._require_exact()
        sol, _ = solve_with_kernel(self, b)
        return sol

    # -- nilpotency -----------------------------------------------------------

    def nilpotency_index(self, tol=None):
        """Least k with self**k == 0, or None if not nilpotent."""
        if self.rows != self.cols:
            return None
        p = self
        for k in range(1, self.rows + 1):
            if p.is_zero(tol):
                return k if k > 1 else 1
            if k == self.rows:
                break
            p = p @ self
        return None if not p.is_zero(tol) else self.rows

    def is_nilpotent(self, tol=None):
        if self.rows != self.cols:
            return False
        p = self
        for _ in range(self.rows):
            if p.is_zero(tol):
                return True
            p = p @ self
        return p.is_zero(tol)

    # -- conversions ------------------------------------------------------------

    def to_numeric(self, precision=256):
        return Matrix(
            [
                [
                    x.to_numeric(precision) if isinstance(x, GaussianRational) else x
                    for x in row
                ]
                for row in self.entries
            ],
            precision=precision,
        )


def _dot_plain(u, v):
    acc = None
    for a, b in zip(u, v):
        term = a * b
        acc = term if acc is None else acc + term
    return acc


def _numeric_identity(n, precision):
    one = NumericComplex(1, 0, precision)
    zero = NumericComplex(0, 0, precision)
    return Matrix([[one if i == j else zero for j in range(n)] for i in range(n)])


def _numeric_inverse(m):
    prec = m.precision
    with mp.workprec(prec + 16):
        a = mpmath.matrix(
            [[x.to_mpc() for x in row] for row in m.entries]
        )
        inv = a ** -1
    return Matrix(
        [
            [NumericComplex.from_mpc(inv[i, j], prec) for j in range(m.cols)]
            for i in range(m.rows)
        ],
        precision=prec,
    )


# ---------------------------------------------------------------------------
# exact row reduction
# ---------------------------------------------------------------------------


def rref(a):
    """In-place reduced row echelon form; returns (rows, pivot column list)."""
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if not a[i][c].is_zero():
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = ONE / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r and not a[i][c].is_zero():
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return a, pivots


def _numeric_rref(a, precision):
    tol_exp = -(precision // 2)
    with mp.workprec(precision + 16):
        rows = [[x.to_mpc() for x in row] for row in a]
        scale = max((abs(x) for row in rows for x in row), default=mpmath.mpf(0))
        if scale == 0:
            return [], []
        tol = scale * mpmath.mpf(2) ** tol_exp
        nrows, ncols = len(rows), len(rows[0])
        pivots = []
        r = 0
        for c in range(ncols):
            piv, best = None, tol
            for i in range(r, nrows):
                if abs(rows[i][c]) > best:
                    piv, best = i, abs(rows[i][c])
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            inv = 1 / rows[r][c]
            rows[r] = [x * inv for x in rows[r]]
            for i in range(nrows):
                if i != r:
                    f = rows[i][c]
                    if abs(f) > 0:
                        rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
            if r == nrows:
                break
        cleaned = []
        for row in rows[:r]:
            cleaned.append([x if abs(x) > tol else mpmath.mpc(0) for x in row])
        return cleaned, pivots


def solve_with_kernel(m, b):
    """Solve m @ x = b exactly; returns (particular solution, kernel basis)."""
    if len(b) != m.rows:
        raise AmbientMismatchError("rhs length mismatch")
    aug = [list(m.entries[i]) + [b[i]] for i in range(m.rows)]
    reduced, pivots = rref(aug)
    if m.cols in pivots:
        raise SolverError("inconsistent linear system")
    x = [ZERO] * m.cols
    for r, p in enumerate(pivots):
        x[p] = reduced[r][m.cols]
    return tuple(x), m.nullspace()


def solve_unique(m, b):
    sol, kernel = solve_with_kernel(m, b)
    if kernel:
        raise SolverError("linear system is underdetermined")
    return sol


# ---------------------------------------------------------------------------
# subspaces
# ---------------------------------------------------------------------------


class Subspace:
    """Linear subspace in canonical reduced (column-)echelon form.

    The basis is stored as a tuple of vectors; in exact mode two equal
    subspaces always have identical representations, so equality is
    representation equality.
    """

    __slots__ = ("ambient_dim", "basis", "kind", "precision")

    def __init__(self, ambient_dim, basis, kind=EXACT, precision=None, _canonical=False):
        if not _canonical:
            raise ValueError("use Subspace.span to construct subspaces")
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "precision", precision)

    def __setattr__(self, *a):
        raise AttributeError("Subspace is immutable")

    @staticmethod
    def span(vectors, ambient_dim=None, precision=None):
        vectors = [vec(v, precision) for v in vectors]
        if ambient_dim is None:
            if not vectors:
                raise ValueError("need ambient_dim for an empty span")
            ambient_dim = len(vectors[0])
        for v in vectors:
            if len(v) != ambient_dim:
                raise AmbientMismatchError("vector length != ambient dimension")
        if not vectors:
            return Subspace(ambient_dim, (), EXACT, None, _canonical=True)
        kind = _kind_of(vectors[0][0])
        if any(_kind_of(x) != kind for v in vectors for x in v):
            raise ExactnessError("mixed exact/numeric span")
        if kind == EXACT:
            rows, _ = rref([list(v) for v in vectors])
            basis = tuple(tuple(r) for r in rows if not vec_is_zero(r))
            return Subspace(ambient_dim, basis, EXACT, None, _canonical=True)
        prec = min(x.precision for v in vectors for x in v)
        rows, _ = _numeric_rref([list(v) for v in vectors], prec)
        basis = tuple(
            tuple(NumericComplex.from_mpc(x, prec) for x in r) for r in rows
        )
        return Subspace(ambient_dim, basis, NUMERIC, prec, _canonical=True)

    @staticmethod
    def zero(ambient_dim):
        return Subspace(ambient_dim, (), EXACT, None, _canonical=True)

    @staticmethod
    def full(ambient_dim):
        return Subspace.span(
            [unit_vector(i, ambient_dim) for i in range(ambient_dim)]
        )

    @property
    def dim(self):
        return len(self.basis)

    def is_zero(self):
        return self.dim == 0

    def is_full(self):
        return self.dim == self.ambient_dim

    def tol(self):
        if self.kind == EXACT:
            return None
        return mpmath.mpf(2) ** (-(self.precision // 2))

    # -- operations ---------------------------------------------------------

    def _require_same_ambient(self, other):
        if self.ambient_dim != other.ambient_dim:
            raise AmbientMismatchError(
                f"ambient dimensions differ: {self.ambient_dim} != {other.ambient_dim}"
            )

    def __add__(self, other):
        self._require_same_ambient(other)
        return Subspace.span(
            list(self.basis) + list(other.basis), self.ambient_dim
        )

    def intersect(self, other):
        """Largest common subspace, via the kernel of the stacked system."""
        self._require_same_ambient(other)
        if self.is_zero() or other.is_zero():
            return Subspace.zero(self.ambient_dim)
        if self.kind == NUMERIC or other.kind == NUMERIC:
            return self._intersect_numeric(other)
        cols = [list(v) for v in self.basis] + [
            [-x for x in v] for v in other.basis
        ]
        stacked = Matrix(list(zip(*cols)))  # ambient x (dim a + dim b)
        kernel = stacked.nullspace()
        vectors = []
        for k in kernel:
            coeffs = k[: self.dim]
            w = [ZERO] * self.ambient_dim
            for c, bvec in zip(coeffs, self.basis):
                if not c.is_zero():
                    w = [a + c * b for a, b in zip(w, bvec)]
            vectors.append(tuple(w))
        return Subspace.span(vectors, self.ambient_dim)

    def _intersect_numeric(self, other):
        prec = min(p for p in (self.precision, other.precision) if p) if (
            self.precision or other.precision
        ) else 256
        with mp.workprec(prec + 16):
            a = [[x.to_mpc() if isinstance(x, NumericComplex) else x.to_mpc(prec) for x in v] for v in self.basis]
            b = [[x.to_mpc() if isinstance(x, NumericComplex) else x.to_mpc(prec) for x in v] for v in other.basis]
            cols = [list(v) for v in a] + [[-x for x in v] for v in b]
            rows = list(map(list, zip(*cols)))
            kern = _numeric_nullspace(rows, prec)
            vecs = []
            for k in kern:
                w = [mpmath.mpc(0)] * self.ambient_dim
                for c, bvec in zip(k[: len(a)], a):
                    w = [x + c * y for x, y in zip(w, bvec)]
                vecs.append([NumericComplex.from_mpc(x, prec) for x in w])
        if not vecs:
            return Subspace.zero(self.ambient_dim)
        return Subspace.span(vecs, self.ambient_dim)

    def conjugate(self):
        if self.kind != EXACT:
            raise ExactnessError("subspace conjugation requires exact mode")
        return Subspace.span([vec_conj(v) for v in self.basis], self.ambient_dim)

    def contains(self, v, tol=None):
        v = vec(v)
        if len(v) != self.ambient_dim:
            raise AmbientMismatchError("vector length != ambient dimension")
        return vec_is_zero(self.reduce(v), tol if tol is not None else self.tol())

    def reduce(self, v):
        """Residual of v after elimination against the echelon basis."""
        v = list(vec(v))
        for bvec in self.basis:
            p = _pivot_index(bvec)
            if p is None:
                continue
            c = v[p]  # canonical pivots equal 1
            v = [a - c * b for a, b in zip(v, bvec)]
        return tuple(v)

    def contains_subspace(self, other, tol=None):
        return all(self.contains(v, tol) for v in other.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        if self.ambient_dim != other.ambient_dim:
            return False
        if self.kind == EXACT and other.kind == EXACT:
            return self.basis == other.basis
        return (
            self.dim == other.dim
            and self.contains_subspace(other)
            and other.contains_subspace(self)
        )

    def __le__(self, other):
        return other.contains_subspace(self)

    def __hash__(self):
        if self.kind != EXACT:
            raise TypeError("numeric subspaces are unhashable")
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        vecs = ", ".join(
            "(" + ", ".join(str(x) for x in v) + ")" for v in self.basis
        )
        return f"Subspace<{self.ambient_dim}>[{vecs}]"

    def basis_matrix(self):
        """Matrix whose columns are the canonical basis vectors."""
        if self.dim == 0:
            raise ValueError("zero subspace has no basis matrix")
        return Matrix.from_columns(list(self.basis))

    def apply(self, m):
        """Image subspace under the matrix m."""
        if self.dim == 0:
            return Subspace.zero(m.rows)
        return Subspace.span([m.apply(v) for v in self.basis], m.rows)

    def extend_to(self, other):
        """Vectors from `other`'s basis extending self to span exactly other."""
        self._require_same_ambient(other)
        current = self
        extension = []
        for v in other.basis:
            if not current.contains(v):
                extension.append(v)
                current = current + Subspace.span([v], self.ambient_dim)
        if current != other:
            raise SolverError("extend_to: self is not contained in other")
        return extension

    def coordinates(self, v):
        """Exact coefficients of v in the canonical basis (or SolverError)."""
        if self.kind != EXACT:
            raise ExactnessError("coordinates need an exact subspace")
        if self.dim == 0:
            raise SolverError("vector not in zero subspace")
        return solve_unique(self.basis_matrix(), vec(v))


def _pivot_index(v):
    for i, x in enumerate(v):
        if isinstance(x, NumericComplex):
            if not (x.re == 0 and x.im == 0):
                return i
        elif not x.is_zero():
            return i
    return None


def _numeric_nullspace(rows, precision):
    reduced, pivots = _numeric_rref(rows, precision)
    ncols = len(rows[0]) if rows else 0
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    with mp.workprec(precision + 16):
        for f in free:
            v = [mpmath.mpc(0)] * ncols
            v[f] = mpmath.mpc(1)
            for r, p in enumerate(pivots):
                v[p] = -reduced[r][f]
            basis.append(v)
    return basis


def subspace_sum(a, b):
    return a + b


def subspace_intersect(a, b):
    return a.intersect(b)


def subspace_conjugate(a):
    return a.conjugate()


# ---------------------------------------------------------------------------
# exponentials and logarithms of nilpotent / unipotent matrices
# ---------------------------------------------------------------------------


def nilpotent_exp(x):
    """exp of a nilpotent matrix as the finite sum of x**k / k!."""
    tol = None if x.kind == EXACT else mpmath.mpf(2) ** (-(x.precision // 2))
    if not x.is_nilpotent(tol):
        raise NonNilpotentError("matrix is not nilpotent")
    n = x.rows
    acc = Matrix.identity(n) if x.kind == EXACT else _numeric_identity(n, x.precision)
    term = acc
    for k in range(1, n):
        term = (term @ x) * qi(rational(1, k))  # term == x**k / k!
        if term.is_zero(tol):
            break
        acc = acc + term
    return acc


def unipotent_log(u):
    """Finite Mercator series log(I + (u - I)) for unipotent u."""
    n = u.rows
    ident = Matrix.identity(n) if u.kind == EXACT else _numeric_identity(n, u.precision)
    a = u - ident
    tol = None if u.kind == EXACT else mpmath.mpf(2) ** (-(u.precision // 2))
    if not a.is_nilpotent(tol):
        raise NonUnipotentError("matrix is not unipotent")
    acc = Matrix.zero(n) if u.kind == EXACT else (ident - ident)
    power = ident
    for k in range(1, n + 1):
        power = power @ a
        if power.is_zero(tol):
            break
        coeff = qi(rational((-1) ** (k + 1), k))
        acc = acc + power * coeff
    return acc


def commutator(a, b):
    return a @ b - b @ a


# ---------------------------------------------------------------------------
# endomorphism space flattening (End(V) as vectors of length n*n, row-major)
# ---------------------------------------------------------------------------


def mat_to_vec(m):
    return tuple(x for row in m.entries for x in row)


def vec_to_mat(v, n):
    return Matrix([list(v[i * n : (i + 1) * n]) for i in range(n)])


# ---------------------------------------------------------------------------
# integral lattice helpers
# ---------------------------------------------------------------------------


def _int_matrix_minors(rows, d):
    """Signed maximal minors of a (d-1) x d integer matrix (cofactor row)."""
    minors = []
    for j in range(d):
        sub = [[r[k] for k in range(d) if k != j] for r in rows]
        m = Matrix([[qi(x) for x in row] for row in sub]) if sub else None
        val = m.det() if m is not None else ONE
        sign = (-1) ** ((d - 1) + j)  # cofactor along an appended last row
        minors.append(sign * int(val.re.numerator))
    return minors


def lattice_saturation_ok(rows, d):
    """True iff integer row vectors span a saturated rank d-1 sublattice."""
    if len(rows) != d - 1:
        return False
    minors = _int_matrix_minors(rows, d)
    g = 0
    for v in minors:
        g = math.gcd(g, abs(v))
    return g == 1


def integral_complement_vector(rows, d):
    """Integer vector v with det[rows; v] = +-1 (rows: d-1 integer vectors)."""
    minors = _int_matrix_minors(rows, d)
    coeffs = _multi_extended_gcd(minors)
    g = sum(c * m for c, m in zip(coeffs, minors))
    if abs(g) != 1:
        raise SolverError("row lattice is not saturated")
    return tuple(c * g for c in coeffs)  # make the determinant +1


def _multi_extended_gcd(values):
    """Integers x with sum(x_i * values_i) = gcd(values)."""
    coeffs = [0] * len(values)
    g = 0
    for i, v in enumerate(values):
        if v == 0:
            continue
        if g == 0:
            g = abs(v)
            coeffs = [0] * len(values)
            coeffs[i] = 1 if v > 0 else -1
            continue
        old_g = g
        g, s, t = _ext_gcd(g, abs(v))
        coeffs = [c * s for c in coeffs]
        coeffs[i] = t * (1 if v > 0 else -1)
        if g == 1:
            break
    if g == 0:
        raise SolverError("all minors vanish")
    return coeffs


def _ext_gcd(a, b):
    if b == 0:
        return a, 1, 0
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y

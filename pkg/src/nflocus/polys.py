"""Univariate polynomials over the Gaussian rationals, and polynomial
matrices (chart coordinates Gamma(s) and everything derived from them).

Only what the zero-locus equations need: exact arithmetic, gcd, Yun
squarefree decomposition, Taylor shifts, evaluation.
"""

import mpmath

from ._backend import rational
from .errors import AmbientMismatchError, NonNilpotentError
from .linalg import Matrix, commutator
from .scalars import GaussianRational, NumericComplex, ONE, ZERO, qi


class Poly:
    """Dense univariate polynomial, coefficients ascending."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [qi(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("Poly is immutable")

    @staticmethod
    def constant(c):
        return Poly([qi(c)])

    @staticmethod
    def variable():
        return Poly([ZERO, ONE])

    @property
    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self):
        return not self.coeffs

    def is_constant(self):
        return len(self.coeffs) <= 1

    def __getitem__(self, k):
        return self.coeffs[k] if k < len(self.coeffs) else ZERO

    def leading(self):
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = other if isinstance(other, Poly) else Poly.constant(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[k] + other[k] for k in range(n)])

    __radd__ = __add__

    def __sub__(self, other):
        other = other if isinstance(other, Poly) else Poly.constant(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[k] - other[k] for k in range(n)])

    def __rsub__(self, other):
        return Poly.constant(other) - self

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (GaussianRational, int, str)):
            c = qi(other)
            return Poly([c * x for x in self.coeffs])
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quo = [ZERO] * max(0, len(rem) - len(other.coeffs) + 1)
        inv_lead = ONE / other.leading()
        d = other.degree
        while len(rem) - 1 >= d and rem:
            k = len(rem) - 1 - d
            f = rem[-1] * inv_lead
            quo[k] = f
            for j, b in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - f * b
            while rem and rem[-1].is_zero():
                rem.pop()
        return Poly(quo), Poly(rem)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def monic(self):
        if self.is_zero():
            return self
        inv = ONE / self.leading()
        return Poly([c * inv for c in self.coeffs])

    def derivative(self):
        return Poly([qi(k) * c for k, c in enumerate(self.coeffs)][1:])

    def shift(self, c):
        """Taylor shift: p(s + c) as a polynomial in s, exact."""
        c = qi(c)
        out = Poly()
        # Horner on (s + c)
        base = Poly([c, ONE])
        for coeff in reversed(self.coeffs):
            out = out * base + Poly.constant(coeff)
        return out

    def eval(self, s):
        if isinstance(s, (GaussianRational, int, str)):
            s = qi(s)
            acc = ZERO
            for coeff in reversed(self.coeffs):
                acc = acc * s + coeff
            return acc
        # numeric evaluation
        if isinstance(s, NumericComplex):
            z = s.to_mpc()
            prec = s.precision
        else:
            z = mpmath.mpc(s)
            prec = mpmath.mp.prec
        with mpmath.mp.workprec(prec + 16):
            acc = mpmath.mpc(0)
            for coeff in reversed(self.coeffs):
                acc = acc * z + coeff.to_mpc(prec + 16)
        return NumericComplex.from_mpc(acc, prec)

    def valuation(self):
        """Order of vanishing at 0 (None for the zero polynomial)."""
        if self.is_zero():
            return None
        for k, c in enumerate(self.coeffs):
            if not c.is_zero():
                return k
        return None

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            if k == 0:
                terms.append(str(c))
            else:
                terms.append(f"({c})*s^{k}")
        return "Poly(" + " + ".join(terms) + ")"


def poly_gcd(a, b):
    """Monic gcd via the Euclidean algorithm over the field Q(i)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def gcd_many(polys):
    g = Poly()
    for p in polys:
        if p.is_zero():
            continue
        g = p.monic() if g.is_zero() else poly_gcd(g, p)
        if g.degree == 0:
            return g
    return g


def squarefree_decomposition(p):
    """Yun's algorithm: list of (factor_i, multiplicity_i), factors monic.

    p = lc * prod factor_i ^ multiplicity_i with the factors squarefree and
    pairwise coprime.
    """
    if p.is_zero() or p.degree == 0:
        return []
    p = p.monic()
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p // a
    c = dp // a
    out = []
    i = 1
    while b.degree > 0:
        d = c - b.derivative()
        f = poly_gcd(b, d)
        if f.degree > 0:
            out.append((f, i))
        b = b // f
        c = d // f
        i += 1
    return out


# ---------------------------------------------------------------------------
# polynomial matrices
# ---------------------------------------------------------------------------


class PolyMatrix:
    """Matrix-valued polynomial in one variable, exact coefficients."""

    __slots__ = ("coeffs", "rows", "cols")

    def __init__(self, coeff_matrices):
        cs = list(coeff_matrices)
        if not cs:
            raise ValueError("need at least one coefficient matrix")
        rows, cols = cs[0].rows, cs[0].cols
        for m in cs:
            if m.rows != rows or m.cols != cols:
                raise AmbientMismatchError("coefficient shape mismatch")
        while len(cs) > 1 and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)

    def __setattr__(self, *a):
        raise AttributeError("PolyMatrix is immutable")

    @staticmethod
    def zero(rows, cols=None):
        return PolyMatrix([Matrix.zero(rows, cols)])

    @staticmethod
    def constant(m):
        return PolyMatrix([m])

    @staticmethod
    def from_terms(terms, rows, cols=None):
        """terms: iterable of (power, Matrix)."""
        cols = rows if cols is None else cols
        top = max((p for p, _ in terms), default=0)
        cs = [Matrix.zero(rows, cols) for _ in range(top + 1)]
        for p, m in terms:
            cs[p] = cs[p] + m
        return PolyMatrix(cs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def coeff(self, k):
        if k < len(self.coeffs):
            return self.coeffs[k]
        return Matrix.zero(self.rows, self.cols)

    def is_zero(self):
        return all(m.is_zero() for m in self.coeffs)

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return PolyMatrix([self.coeff(k) + other.coeff(k) for k in range(n)])

    def __sub__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return PolyMatrix([self.coeff(k) - other.coeff(k) for k in range(n)])

    def __neg__(self):
        return PolyMatrix([-m for m in self.coeffs])

    def __matmul__(self, other):
        out = [
            Matrix.zero(self.rows, other.cols)
            for _ in range(len(self.coeffs) + len(other.coeffs) - 1)
        ]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a @ b
        return PolyMatrix(out)

    def scale(self, c):
        c = qi(c)
        return PolyMatrix([m * c for m in self.coeffs])

    def eval(self, s):
        """Exact evaluation at a GaussianRational point."""
        s = qi(s)
        acc = Matrix.zero(self.rows, self.cols)
        for m in reversed(self.coeffs):
            acc = acc * s + m
        return acc

    def eval_numeric(self, z, precision):
        """Evaluation at an mpmath complex point, Horner at working precision."""
        with mpmath.mp.workprec(precision + 16):
            z = mpmath.mpc(z)
            acc = [[mpmath.mpc(0)] * self.cols for _ in range(self.rows)]
            for m in reversed(self.coeffs):
                for i in range(self.rows):
                    row = acc[i]
                    for j in range(self.cols):
                        row[j] = row[j] * z + m.entry(i, j).to_mpc(precision + 16)
            return [
                [NumericComplex.from_mpc(acc[i][j], precision) for j in range(self.cols)]
                for i in range(self.rows)
            ]

    def derivative(self):
        if self.degree == 0:
            return PolyMatrix.zero(self.rows, self.cols)
        return PolyMatrix(
            [self.coeffs[k] * qi(k) for k in range(1, len(self.coeffs))]
        )

    def shift(self, c):
        """P(s + c) as a PolyMatrix in s."""
        c = qi(c)
        entries = self.entry_polys()
        shifted = [[p.shift(c) for p in row] for row in entries]
        return polymatrix_from_entry_polys(shifted)

    def entry_polys(self):
        return [
            [
                Poly([m.entry(i, j) for m in self.coeffs])
                for j in range(self.cols)
            ]
            for i in range(self.rows)
        ]

    def apply_vector(self, v):
        """Vector of Polys: the matrix polynomial applied to a constant vector."""
        out = []
        for i in range(self.rows):
            out.append(
                Poly([m.apply(v)[i] for m in self.coeffs])
            )
        return out

    def transpose(self):
        return PolyMatrix([m.transpose() for m in self.coeffs])

    def conjugate(self):
        """Coefficient-wise conjugate: represents conj(P(conj(s)))."""
        return PolyMatrix([m.conjugate() for m in self.coeffs])

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return all(self.coeff(k) == other.coeff(k) for k in range(n))

    def __repr__(self):
        return f"PolyMatrix(degree={self.degree}, shape=({self.rows},{self.cols}))"


def polymatrix_from_entry_polys(entries):
    rows = len(entries)
    cols = len(entries[0])
    top = max((p.degree for row in entries for p in row if not p.is_zero()), default=0)
    cs = []
    for k in range(top + 1):
        cs.append(
            Matrix([[entries[i][j][k] for j in range(cols)] for i in range(rows)])
        )
    return PolyMatrix(cs)


def poly_exp(pm, max_order=None):
    """exp of a nilpotent matrix polynomial (finite sum), exact."""
    n = pm.rows
    cap = n if max_order is None else max_order
    acc = PolyMatrix.constant(Matrix.identity(n))
    term = acc
    for k in range(1, cap + 1):
        term = (term @ pm).scale(rational(1, k))
        if term.is_zero():
            return acc
        acc = acc + term
    # nilpotency must have terminated the series
    if not (term @ pm).is_zero():
        raise NonNilpotentError("matrix polynomial is not nilpotent")
    return acc


def poly_log_unipotent(pm):
    """log of a unipotent matrix polynomial U = I + A (Mercator, finite)."""
    n = pm.rows
    a = pm - PolyMatrix.constant(Matrix.identity(n))
    acc = PolyMatrix.zero(n, n)
    power = PolyMatrix.constant(Matrix.identity(n))
    for k in range(1, 2 * n + 2):
        power = power @ a
        if power.is_zero():
            return acc
        acc = acc + power.scale(rational((-1) ** (k + 1), k))
    if not power.is_zero():
        raise NonNilpotentError("matrix polynomial is not unipotent")
    return acc


def poly_ad(a, b):
    """Commutator [a, b] of matrix polynomials."""
    return a @ b - b @ a


def psi_of_ad_poly(gamma0, gamma_minus1, cap=None):
    """Sum of (ad gamma0)^j gamma_minus1 / (j+1)! as a matrix polynomial."""
    acc = gamma_minus1
    term = gamma_minus1
    n = gamma0.rows
    cap = 2 * n if cap is None else cap
    for j in range(1, cap + 1):
        term = poly_ad(gamma0, term).scale(rational(1, j + 1))
        if term.is_zero():
            break
        acc = acc + term
    return acc

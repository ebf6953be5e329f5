"""Certified rational bounds used by the zero-locus radius certificates.

Everything here returns exact rationals that provably over- or
under-estimate the true real quantity, so the radius certificates never
depend on floating rounding.
"""

import math

from ._backend import rational
from .errors import SolverError
from .linalg import Matrix, rref
from .scalars import ONE, ZERO, qi


def sqrt_ub(q):
    """Rational upper bound for sqrt(q), q a nonnegative rational."""
    num, den = int(q.numerator), int(q.denominator)
    if num < 0:
        raise ValueError("sqrt of negative rational")
    if num == 0:
        return rational(0)
    # sqrt(n/d) = sqrt(n*d)/d
    s = math.isqrt(num * den)
    if s * s < num * den:
        s += 1
    return rational(s, den)


def sqrt_lb(q):
    """Rational lower bound for sqrt(q)."""
    num, den = int(q.numerator), int(q.denominator)
    if num <= 0:
        return rational(0)
    s = math.isqrt(num * den)
    return rational(s, den)


def abs_ub(z):
    """Rational upper bound for |z|, z a GaussianRational."""
    return sqrt_ub(z.abs2())


def vec_norm_ub(v):
    s = rational(0)
    for x in v:
        s = s + x.abs2()
    return sqrt_ub(s)


def fro_norm_sq(m):
    s = rational(0)
    for row in m.entries:
        for x in row:
            s = s + x.abs2()
    return s


def fro_norm_ub(m):
    """Frobenius upper bound for the operator 2-norm of an exact matrix."""
    return sqrt_ub(fro_norm_sq(m))


def _leading_minors_positive(q):
    """Sylvester test: all leading principal minors of a Hermitian matrix > 0."""
    n = q.rows
    for k in range(1, n + 1):
        sub = Matrix([[q.entry(i, j) for j in range(k)] for i in range(k)])
        d = sub.det()
        if d.im != 0:
            raise SolverError("minor of a Hermitian matrix must be real")
        if not d.re > 0:
            return False
    return True


def is_positive_definite(q):
    """Exact positive-definiteness of a Hermitian Gaussian-rational matrix."""
    if q.rows != q.cols:
        raise SolverError("positivity test needs a square matrix")
    for i in range(q.rows):
        for j in range(q.cols):
            if q.entry(i, j) != q.entry(j, i).conjugate():
                raise SolverError("matrix is not Hermitian")
    return _leading_minors_positive(q)


def min_eigenvalue_lb(q, iters=40):
    """Certified rational lower bound for the least eigenvalue of Hermitian q.

    Bisection on t with the exact test "q - t*I positive definite".  Returns 0
    if q is merely positive semidefinite at every probed level.
    """
    n = q.rows
    ident = Matrix.identity(n)
    hi = None
    for i in range(n):
        d = q.entry(i, i)
        if d.im != 0:
            raise SolverError("diagonal of a Hermitian matrix must be real")
        hi = d.re if hi is None or d.re < hi else hi
    if hi is None or not hi > 0:
        return rational(0)
    lo = rational(0)
    if not is_positive_definite(q):
        return rational(0)
    # invariant: q - lo*I is PD, q - hi*I unknown/indefinite
    for _ in range(iters):
        mid = (lo + hi) / 2
        if mid == lo:
            break
        shifted = q - ident * qi(mid)
        if is_positive_definite(shifted):
            lo = mid
        else:
            hi = mid
    return lo


def max_eigenvalue_ub(q):
    """Cheap certified upper bound (Gershgorin) for Hermitian q."""
    best = None
    for i in range(q.rows):
        center = q.entry(i, i).re
        radius = rational(0)
        for j in range(q.cols):
            if j != i:
                radius = radius + abs_ub(q.entry(i, j))
        val = center + radius
        best = val if best is None or val > best else best
    return best if best is not None else rational(0)


def hermitian_projector(basis_matrix):
    """Orthogonal projector B (B*B)^-1 B* onto the column span, exact."""
    b = basis_matrix
    bstar = b.conjugate().transpose()
    gram = bstar @ b
    return b @ gram.inverse() @ bstar


def real_part_matrix(m):
    return Matrix([[qi(x.re, 0) for x in row] for row in m.entries])


def poly_coeff_norm_bound(coeff_vectors, r):
    """Upper bound of sum_k ||c_k|| r^k over |s| <= r (rational r >= 0)."""
    total = rational(0)
    rk = rational(1)
    for ck in coeff_vectors:
        total = total + vec_norm_ub(ck) * rk
        rk = rk * r
    return total

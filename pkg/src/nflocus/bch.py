"""Campbell-Baker-Hausdorff transport and group actions on gradings.

The transport series psi(ad u)v = v + sum_{j>0} (ad u)^j v / (j+1)!
(the coefficients of (e^t - 1)/t) agrees with the matrix-log transport
log(exp(u+v) exp(-u)) exactly whenever words with two v letters vanish,
which is automatic in the two-step setting where W_{-2}End = 0.  Outside
that setting bch_transport returns the true logarithm and psi_series is a
truncation.
"""

from ._backend import rational
from .errors import NonNilpotentError
from .filtrations import Grading
from .linalg import Matrix, Subspace, commutator, nilpotent_exp, unipotent_log
from .scalars import qi


class AdAction:
    """ad u acting on End(V); nilpotent when u is."""

    __slots__ = ("operator", "dim")

    def __init__(self, operator):
        if not operator.is_nilpotent():
            raise NonNilpotentError("ad action requires a nilpotent operator")
        object.__setattr__(self, "operator", operator)
        object.__setattr__(self, "dim", operator.rows)

    def __setattr__(self, *a):
        raise AttributeError("AdAction is immutable")

    def __call__(self, x):
        return commutator(self.operator, x)

    def nilpotency_bound(self):
        return 2 * self.dim


def bch_transport(u, v):
    """log(exp(u+v) exp(-u)), exact for nilpotent u, v with u+v nilpotent."""
    for name, m in (("u", u), ("v", v), ("u+v", u + v)):
        if not m.is_nilpotent():
            raise NonNilpotentError(f"{name} is not nilpotent")
    return unipotent_log(nilpotent_exp(u + v) @ nilpotent_exp(-u))


def psi_series(u, v):
    """v + sum_{j>=1} (ad u)^j v / (j+1)!, truncated by nilpotency."""
    for name, m in (("u", u), ("v", v), ("u+v", u + v)):
        if not m.is_nilpotent():
            raise NonNilpotentError(f"{name} is not nilpotent")
    ad = AdAction(u)
    acc = v
    term = v
    for j in range(1, ad.nilpotency_bound() + 1):
        term = ad(term) * qi(rational(1, j + 1))
        if term.is_zero():
            break
        acc = acc + term
    return acc


def act_on_grading(g, y):
    """Dot action: piece k of the result is g applied to piece k of y."""
    g_mat = g.matrix if hasattr(g, "matrix") else g
    try:
        g_mat.inverse()
    except Exception:
        raise ValueError("group element must be invertible") from None
    return Grading({k: s.apply(g_mat) for k, s in y.pieces.items()})


def grading_transport_report(gamma0, gamma_minus1, y):
    """Check exp(Gamma).Y = Y + psi(ad Gamma_0) Gamma_-1 exactly.

    gamma0 / gamma_minus1 must be the ad-y eigencomponents at 0 and -1.
    Returns a report with the residual matrix (zero on success).
    """
    y_mat = y.as_matrix() if isinstance(y, Grading) else y
    if not commutator(y_mat, gamma0).is_zero():
        raise ValueError("gamma0 is not in the 0 eigencomponent of ad y")
    if commutator(y_mat, gamma_minus1) != -gamma_minus1:
        raise ValueError("gamma_minus1 is not in the -1 eigencomponent of ad y")
    g = nilpotent_exp(gamma0 + gamma_minus1)
    lhs = g @ y_mat @ g.inverse()
    rhs = y_mat + psi_series(gamma0, gamma_minus1)
    residual = lhs - rhs
    return ResidualReport(residual.is_zero(), residual)


class ResidualReport:
    __slots__ = ("ok", "residual")

    def __init__(self, ok, residual):
        object.__setattr__(self, "ok", ok)
        object.__setattr__(self, "residual", residual)

    def __setattr__(self, *a):
        raise AttributeError("ResidualReport is immutable")

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return f"ResidualReport(ok={self.ok})"

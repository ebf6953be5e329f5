"""Zero loci of normal functions: exact mixed-Hodge linear algebra toolkit."""

__version__ = "0.1.0"

from ._backend import BACKEND_NAME, HAVE_GMPY2
from .scalars import GaussianRational, NumericComplex, qi
from .linalg import Matrix, Subspace, nilpotent_exp, unipotent_log

__all__ = [
    "BACKEND_NAME",
    "HAVE_GMPY2",
    "GaussianRational",
    "NumericComplex",
    "qi",
    "Matrix",
    "Subspace",
    "nilpotent_exp",
    "unipotent_log",
    "__version__",
]

"""Exception taxonomy.

Mathematical outcomes (a germ fails a hypothesis, an integrality question
cannot be settled at the working precision) are distinct exception classes
so callers and the CLI can map them to exit codes without string matching.
"""


class NFLocusError(Exception):
    """Base class for all package errors."""


class AmbientMismatchError(NFLocusError):
    """Operands live in vector spaces of different dimensions."""


class NonNilpotentError(NFLocusError):
    pass


class NonUnipotentError(NFLocusError):
    pass


class ExactnessError(NFLocusError):
    """An operation restricted to exact values received numeric input."""


class UnsupportedShapeError(NFLocusError):
    """Weight filtration is not of the two-step normal-function shape."""


class NonexistenceError(NFLocusError):
    """No relative weight filtration exists (non-admissible germ)."""


class MHSValidationError(NFLocusError):
    """A filtration pair fails the mixed Hodge structure axioms."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class OutOfChartError(NFLocusError):
    """Target filtration is not in the image of the chart map."""


class SolverError(NFLocusError):
    """A linear solve had no solution or a non-unique one."""


class OutOfRadiusError(NFLocusError):
    """Evaluation point outside the germ's validity disk."""


class NotAZeroAtCenterError(NFLocusError):
    """Interior zero-locus query at a center where the class is nonzero.

    Carries the Empty description valid on a computed neighborhood.
    """

    def __init__(self, message, empty_description=None):
        super().__init__(message)
        self.empty_description = empty_description


class NonAdmissibleError(NFLocusError):
    """Puncture germ fails an admissibility condition."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class UndecidedIntegralityError(NFLocusError):
    """Distance of the limit grading to the lattice is inside the error bar."""

    def __init__(self, message, distance=None, error_estimate=None):
        super().__init__(message)
        self.distance = distance
        self.error_estimate = error_estimate


class ConvergenceError(NFLocusError):
    """Extrapolation error estimates failed to decrease."""


class PrecisionUnderflowError(NFLocusError):
    pass


class SchemaError(NFLocusError):
    """Germ document violates the input schema.

    ``problems`` is a list of (json_path, message) pairs.
    """

    def __init__(self, message, problems=None):
        super().__init__(message)
        self.problems = problems or []

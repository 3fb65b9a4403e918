"""Exception types shared across the package."""


class BFPError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(BFPError, ValueError):
    """An input violates a documented precondition."""


class NonFiniteError(ValidationError):
    """An input contains NaN or infinite entries."""


class DimensionMismatchError(ValidationError):
    """Operands have incompatible shapes."""


class NotPositiveError(ValidationError):
    """A vector required to be strictly positive is not."""


class NotPSDError(ValidationError):
    """A matrix required to be positive semidefinite is materially indefinite."""


class NotPDError(NotPSDError):
    """A matrix required to be strictly positive definite is not."""


class RankDeficientError(ValidationError):
    """A matrix is numerically rank-deficient where full rank is required."""


class MatrixParseError(ValidationError):
    """A matrix file or CSV does not conform to its documented format."""


class NoConvergenceError(BFPError, RuntimeError):
    """An iterative routine exhausted its budget without reaching tolerance."""


class StepTooLargeError(ValidationError):
    """A finite-difference step would leave the positive orthant."""


class LineSearchError(BFPError, RuntimeError):
    """Backtracking line search exhausted its budget.

    Carries the partial solve trace (if any) in ``trace`` so callers can
    report progress made before the failure.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace

"""Exception hierarchy for the toolkit.

Every error raised on a documented failure path derives from FJMMError so
callers can catch toolkit failures without swallowing programming errors.
"""


class FJMMError(Exception):
    """Base class for all toolkit errors."""


class InvalidParameterError(FJMMError, ValueError):
    """A parameter is outside its documented range."""


class GenerationFailureError(FJMMError):
    """A random-graph generator exhausted its retry budget."""


class NormalizationError(FJMMError):
    """A graph row cannot be normalized (node without neighbors)."""


class MatrixValidationError(FJMMError, ValueError):
    """A matrix violates a structural requirement (shape, sign, row sums)."""


class InvalidStateError(FJMMError):
    """A recursion was driven with an inconsistent state (wrong history length)."""


class InstabilityError(FJMMError):
    """An equilibrium was requested for an unstable model.

    Carries the stability report so callers can inspect why.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NumericalFailureError(FJMMError):
    """Non-finite values appeared where boundedness is guaranteed (bug signal)."""


class InvariantViolationError(FJMMError):
    """A mathematically guaranteed invariant failed numerically (bug signal)."""


class SpectralAccuracyError(FJMMError):
    """Power iteration hit its iteration budget before reaching the tolerance.

    Attributes:
        bracket: rigorous (lower, upper) bounds on the spectral radius.
        estimate: best point estimate at abort time.
        iterations: iterations performed.
    """

    def __init__(self, message, bracket, estimate, iterations):
        super().__init__(message)
        self.bracket = bracket
        self.estimate = estimate
        self.iterations = iterations

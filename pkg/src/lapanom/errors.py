"""Exception types shared across the package."""


class LapanomError(Exception):
    """Base class for all errors raised by this package."""


class EdgeListParseError(LapanomError):
    """A snapshot edge-list file could not be parsed."""


class ValidationError(LapanomError):
    """An input violates a documented precondition or invariant."""


class DimensionError(ValidationError):
    """Matrix or vector dimensions are inconsistent with the request."""


class ConfigurationError(ValidationError):
    """A window or parameter configuration is unusable for the given data."""


class NumericalInputError(LapanomError):
    """Numerical input contains NaN or infinite entries."""


class ConvergenceError(LapanomError):
    """An iterative solver exhausted its iteration budget.

    The ``iterations`` attribute records the budget that was spent.
    """

    def __init__(self, message, iterations=None):
        super().__init__(message)
        self.iterations = iterations


class UndefinedStatisticError(LapanomError):
    """A statistic is undefined for the given input (constant series, empty truth set)."""

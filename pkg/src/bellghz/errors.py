"""Exception types shared across the package."""


class BellGhzError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(BellGhzError):
    """Invalid or inconsistent run configuration."""


class AmbiguousLevelError(BellGhzError):
    """An eigenstate could not be matched to a bare state (overlap below 0.5)."""


class SearchFailureError(BellGhzError):
    """Avoided-crossing search failed (gap not unimodal or window does not bracket)."""


class DivergentDenominatorError(BellGhzError):
    """A perturbation-theory energy denominator is inside the guard band around zero."""


class IntegrationFailureError(BellGhzError):
    """A density-matrix invariant was violated during time evolution."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class NumericalIntegrityError(BellGhzError):
    """A quantity that must be nonnegative came out significantly negative."""

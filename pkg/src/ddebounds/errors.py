"""Exception hierarchy shared by all ddebounds modules."""


class DdeBoundsError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameterError(DdeBoundsError):
    """A family parameter or algorithm argument is outside its admissible set."""


class DomainError(DdeBoundsError):
    """A map was evaluated outside its domain."""


class CriticalPointError(DdeBoundsError):
    """Schwarzian derivative requested where |f'| is below the configured floor."""


class ClassificationError(DdeBoundsError):
    """An operation requires a map class (S/SU) that the given map does not have."""


class NotApplicableError(DdeBoundsError):
    """The requested construction exists only under a hypothesis that fails here."""


class NotDecidableError(DdeBoundsError):
    """The dichotomy cannot be decided for this map class (SU with f2(x0) < x0)."""


class NoSignChangeError(DdeBoundsError):
    """A bracketing root finder was given an interval without a sign change."""


class InversionError(DdeBoundsError):
    """A numerical inverse could not be bracketed on the monotone branch."""


class DomainEscapeError(DdeBoundsError):
    """An orbit iterate left the map domain."""

    def __init__(self, message, x=None, step=None):
        super().__init__(message)
        self.x = x
        self.step = step


class BlowUpError(DdeBoundsError):
    """The integrated solution exceeded the overflow guard."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class InvalidHistoryError(DdeBoundsError):
    """The supplied history segment violates the problem's admissibility rules."""


class TooShortError(DdeBoundsError):
    """The trajectory does not cover enough delay intervals for tail statistics."""


class ContourRootError(DdeBoundsError):
    """A characteristic root sits on the counting contour even after perturbation."""


class ConfigError(DdeBoundsError):
    """A run configuration file could not be parsed or validated."""

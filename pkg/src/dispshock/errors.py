"""Exception hierarchy shared across the package."""


class DispShockError(Exception):
    """Base class for all package errors."""


class DomainError(DispShockError, ValueError):
    """An argument lies outside the region where a formula is defined."""


class AdmissibilityError(DispShockError, ValueError):
    """End states are inconsistent with the requested shock family."""


class HypothesisError(DispShockError):
    """A structural hypothesis on the reduced potential fails numerically."""


class BracketError(DispShockError):
    """A root bracket could not be established inside the domain."""


class TurningPointError(DispShockError):
    """Turning points of a periodic orbit could not be located."""


class BlowupError(DispShockError):
    """A trajectory left its guard box."""


class StepUnderflow(DispShockError):
    """The adaptive step size collapsed below the resolvable limit."""


class NonconvergenceError(DispShockError):
    """The tau budget was exhausted before the energy reached its stop level."""


class InsufficientDataError(DispShockError, ValueError):
    """Too few data points for a fit."""


class ConfigError(DispShockError, ValueError):
    """Invalid experiment configuration."""


class FrictionError(RuntimeWarning):
    """Friction is at or above the spiral threshold; the profile is monotone.

    Issued as a warning: the problem is still constructed, just flagged.
    """

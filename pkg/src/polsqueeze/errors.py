"""Exception types raised across the package."""


class PolSqueezeError(Exception):
    """Base class for all package errors."""


class DomainError(PolSqueezeError, ValueError):
    """An argument lies outside the domain of an operation."""


class DegenerateState(PolSqueezeError, ValueError):
    """A state could not be normalized because every amplitude is zero."""


class CutoffTooSmall(PolSqueezeError):
    """Truncating at the requested cutoff would drop more probability than allowed."""

    def __init__(self, message, tail_norm=None):
        super().__init__(message)
        self.tail_norm = tail_norm


class CutoffExhausted(PolSqueezeError):
    """The cutoff policy hit its ceiling before the convergence gates closed."""


class ConsistencyError(PolSqueezeError, ArithmeticError):
    """A quantity that must be real (or otherwise constrained) came out inconsistent."""

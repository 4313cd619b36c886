"""Exception hierarchy shared across the package."""


class OdsError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(OdsError, ValueError):
    """A constructed object or argument violates its contract."""


class NotOdsError(ValidationError):
    """Drive parameters do not satisfy the oscillating-dark-state conditions."""


class NumericalStateError(OdsError):
    """A numerically computed state quantity is outside its admissible range."""


class IntegratorError(OdsError):
    """The integrator produced a state violating density-matrix tolerances."""


class DivergenceError(IntegratorError):
    """The integration produced NaN/Inf entries."""


class ConfigError(OdsError):
    """A configuration document could not be parsed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line

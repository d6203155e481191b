"""Exception and warning types shared across the package."""


class TWPAError(Exception):
    """Base class for all errors raised by twpasim."""


class DomainError(TWPAError, ValueError):
    """An input lies outside the range where a formula is defined."""


class SingularityError(DomainError):
    """Evaluation at (or numerically on top of) a pole of the line response."""

    def __init__(self, message, pole_omega):
        super().__init__(message)
        self.pole_omega = pole_omega


class StopBandError(DomainError):
    """A mode frequency lies in a stop band (negative effective capacitance)."""

    def __init__(self, message, mode=None):
        super().__init__(message)
        self.mode = mode


class DivergenceError(TWPAError, ArithmeticError):
    """An integrator produced non-finite values."""

    def __init__(self, message, step):
        super().__init__(message)
        self.step = step


class TruncationError(TWPAError):
    """A truncated Fock space is too small for the requested accuracy."""


class ConfigError(TWPAError, ValueError):
    """Malformed or inconsistent run configuration."""


class ValidityWarning(UserWarning):
    """Operating point outside the regime where the weak-nonlinearity theory holds."""


class LongWavelengthWarning(UserWarning):
    """Wavelength not long compared to the unit cell (k*a >= 1)."""

"""Exception hierarchy shared by every module of the package."""


class NmGaussError(Exception):
    """Base class for all package errors."""


class DomainError(NmGaussError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UnsupportedFamilyError(NmGaussError, ValueError):
    """A closed form was requested for a spectral family that has none."""


class UnsupportedInputError(NmGaussError, ValueError):
    """The input does not have the block structure a closed form assumes."""


class NumericalDegeneracyError(NmGaussError, ArithmeticError):
    """Round-off pushed an invariant outside its admissible range."""


class UnphysicalStateError(NmGaussError, ValueError):
    """A covariance matrix violates the uncertainty principle."""

    def __init__(self, message, nu_minus=None, tau=None):
        super().__init__(message)
        self.nu_minus = nu_minus
        self.tau = tau


class UndefinedMarkerError(NmGaussError, ArithmeticError):
    """A marker is 0/0 for the given state (e.g. intensity marker at vacuum)."""


class QuadratureError(NmGaussError, RuntimeError):
    """Adaptive quadrature did not converge within its budget."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class IntegrationError(NmGaussError, RuntimeError):
    """The ODE integrator failed (step-size collapse or similar)."""


class ConfigError(NmGaussError, ValueError):
    """A sweep configuration could not be parsed or validated."""

    def __init__(self, message, field=None, line=None):
        loc = []
        if field is not None:
            loc.append(f"field '{field}'")
        if line is not None:
            loc.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(loc)})" if loc else message)
        self.message = message
        self.field = field
        self.line = line

"""Exception hierarchy shared by every module of the package."""


class SnqiError(ValueError):
    """Base class for all errors raised by this package."""


class DimensionError(SnqiError):
    """Operand shapes do not fit together."""

    def __init__(self, message, expected=None, got=None):
        super().__init__(message)
        self.expected = expected
        self.got = got


class NotPositiveError(SnqiError):
    """A matrix expected to be positive semidefinite has a negative eigenvalue."""

    def __init__(self, message, min_eigenvalue):
        super().__init__(f"{message} (min eigenvalue {min_eigenvalue:.3e})")
        self.min_eigenvalue = min_eigenvalue


class NotHermitianError(SnqiError):
    """A matrix expected to be Hermitian is not, beyond tolerance."""


class NotDensityError(SnqiError):
    """Trace or positivity of a would-be density operator is off."""


class DomainError(SnqiError):
    """A scalar parameter lies outside its admissible range."""

    def __init__(self, name, value, allowed):
        super().__init__(f"{name}={value!r} outside {allowed}")
        self.name = name
        self.value = value
        self.allowed = allowed


class NonFiniteError(SnqiError):
    """An integrand produced NaN or inf on a quadrature node."""


class SolverError(SnqiError):
    """An iterative solver stopped above its tolerance."""

    def __init__(self, message, residual):
        super().__init__(f"{message} (best residual {residual:.3e})")
        self.residual = residual


class UnknownEnsembleError(SnqiError):
    """No closed form is registered for the requested ensemble family."""

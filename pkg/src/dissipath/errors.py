"""Exception hierarchy shared by all modules."""


class DissipathError(Exception):
    """Base class for every error raised by the library."""


class DomainError(DissipathError, ValueError):
    """An argument lies outside the domain on which a quantity is defined."""


class SingularInputError(DomainError):
    """The requested point sits on a branch cut or pole."""


class CancellationError(DissipathError, ArithmeticError):
    """A formula was forced into a region where it loses all precision."""


class ValidityError(DomainError):
    """A temperature violates the continuum condition T > E_0 in strict mode."""


class QuadratureError(DissipathError, RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance.

    The best available estimate is kept on the exception.
    """

    def __init__(self, message, value=None, abs_error_estimate=None, evaluations=0):
        super().__init__(message)
        self.value = value
        self.abs_error_estimate = abs_error_estimate
        self.evaluations = evaluations


class SeriesError(DissipathError, RuntimeError):
    """A tail-corrected sum did not converge or its tail model does not fit."""

    def __init__(self, message, value=None, terms_used=0):
        super().__init__(message)
        self.value = value
        self.terms_used = terms_used

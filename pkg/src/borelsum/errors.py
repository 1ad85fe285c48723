"""Exception types shared across the package."""


class BorelSumError(Exception):
    """Base class for all package errors."""


class DomainError(BorelSumError, ValueError):
    """An argument lies outside the mathematical domain of an operation,
    e.g. Re(z) <= B where a bound requires Re(z) > B."""


class PoleError(DomainError):
    """A gamma-function argument landed on a nonpositive integer."""


class InsufficientCoefficientsError(BorelSumError, LookupError):
    """A truncation requires more series coefficients than are stored.

    Raised instead of silently zero-padding, since padding would corrupt
    both estimates and error estimates.
    """


class QuadratureError(BorelSumError, ArithmeticError):
    """The adaptive quadrature failed to reach the requested tolerance."""

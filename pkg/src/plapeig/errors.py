"""Exception hierarchy.

Two families: :class:`DomainError` for inputs outside an operation's
preconditions, :class:`NumericalError` for kernels that ran but failed to
deliver the requested accuracy. The CLI maps them to exit codes 1 and 2.
"""


class PlapeigError(Exception):
    """Base class for all package errors."""


class DomainError(PlapeigError, ValueError):
    """Argument outside the operation's domain."""


class PoleError(DomainError):
    """A p-trigonometric ratio was evaluated at a pole."""

    def __init__(self, message, sign=0):
        super().__init__(message)
        self.sign = sign


class NumericalError(PlapeigError, RuntimeError):
    """A numerical kernel failed."""


class IntegrandError(NumericalError):
    """Non-finite integrand sample away from the endpoints."""


class QuadratureError(NumericalError):
    """Quadrature tolerance not reached within the refinement budget."""

    def __init__(self, message, best_estimate=None, error_estimate=None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate


class BracketError(NumericalError):
    """Root bracket does not contain a sign change."""


class ODEError(NumericalError):
    """ODE integration failed (step underflow or non-finite state)."""


class EigenSolveError(NumericalError):
    """Eigenvalue bracketing or refinement failed."""

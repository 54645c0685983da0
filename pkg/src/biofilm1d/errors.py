"""Exception types raised by the solvers."""


class InvalidInputError(ValueError):
    """A parameter or input array is non-finite, out of range, or malformed."""


class DomainError(ValueError):
    """An operation was requested outside the parameter regime it is defined for."""


class ConvergenceError(RuntimeError):
    """An iterative solver did not reach its tolerance.

    The last residual is kept on ``residual`` so callers can decide whether
    the result is usable anyway.
    """

    def __init__(self, message, residual=float("nan"), iterations=0):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class StepSizeError(RuntimeError):
    """Adaptive time stepping shrank the step below its floor."""


class InvariantViolationError(RuntimeError):
    """A discrete solution left the set guaranteed by the continuous problem."""


class NoEquilibriumError(Exception):
    """No positive equilibrium exists (or none was bracketed).

    Deliberately not a ``RuntimeError``: for ``g(r(c*)) <= 0`` this is the
    expected outcome, not a solver failure.
    """

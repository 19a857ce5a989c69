"""Exception hierarchy shared by all rectconv modules."""


class RectConvError(Exception):
    """Base class for every error raised by this package."""


class InvalidArgumentError(RectConvError, ValueError):
    """An argument violates a documented precondition."""


class DomainError(RectConvError, ArithmeticError):
    """The requested quantity is undefined for the given input."""


class PoleError(DomainError):
    """Evaluation hit a zero of a denominator polynomial."""


class ConvergenceError(RectConvError, RuntimeError):
    """An iterative routine failed to reach its tolerance."""


class InvariantViolation(RectConvError, RuntimeError):
    """An internal invariant that should hold by construction did not."""

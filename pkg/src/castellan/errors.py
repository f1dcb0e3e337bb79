"""Exception types shared across the package."""


class CastellanError(Exception):
    pass


class InvalidParams(CastellanError, ValueError):
    """Raised for an (l, alpha) pair outside l >= 3, 1 <= alpha <= l - alpha."""


class NonPositiveResult(CastellanError, ArithmeticError):
    """A castling move produced an entry <= 0."""

    def __init__(self, value, position):
        super().__init__(f"castling at {position} gives non-positive entry {value}")
        self.value = value
        self.position = position


class BudgetExceeded(CastellanError):
    """Enumeration or search hit its work cap.

    ``partial`` carries whatever was produced before the cut.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class InvariantViolation(CastellanError, AssertionError):
    """An internal invariant failed (e.g. residual drift during descent)."""


class SingularDimension(CastellanError, ZeroDivisionError):
    pass


class SingularL(CastellanError, ZeroDivisionError):
    pass


class RequiresExhaustive(CastellanError):
    pass

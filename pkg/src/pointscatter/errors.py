"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the domain where a function is defined."""


class PreconditionError(ValueError):
    """Inputs violate a documented precondition (grid resolution, radius, sizes)."""


class ResonanceError(ArithmeticError):
    """The charge system is numerically singular: resonant configuration."""

    def __init__(self, message: str, cond: float):
        super().__init__(message)
        self.cond = cond


class ConvergenceError(ArithmeticError):
    """An iterative numerical routine hit its iteration cap."""

"""Exception hierarchy shared across the package."""


class SkyhaulError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(SkyhaulError, ValueError):
    """A channel/config parameter violates its validity domain."""


class GammaPoleError(SkyhaulError, ArithmeticError):
    """Gamma function evaluated at a non-positive integer."""


class ConvergenceError(SkyhaulError, ArithmeticError):
    """A numerical strategy failed to converge.

    `strategy` names the path that failed ("residue", "contour", "series").
    """

    def __init__(self, message: str, strategy: str = ""):
        super().__init__(message)
        self.strategy = strategy


class MomentValidityError(SkyhaulError, ValueError):
    """Moment matching produced an invalid (non-positive) variance."""

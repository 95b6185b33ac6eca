"""Exception types shared across the package."""


class KSHError(Exception):
    """Base class for all package errors."""


class NumericRangeError(KSHError, ArithmeticError):
    """A value left the range representable in double precision."""


class QuadratureError(KSHError, ArithmeticError):
    """A quadrature node produced a NaN or +inf integrand value."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class ConvexityError(KSHError, ValueError):
    """A complexifier failed its convexity certificate."""


class FitError(KSHError, ArithmeticError):
    """An asymptotic least-squares fit was ill-posed."""

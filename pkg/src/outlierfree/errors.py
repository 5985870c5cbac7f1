"""Exception types raised across the package."""


class OutlierFreeError(Exception):
    """Base class for all errors raised by this package."""


class InvalidOrderError(OutlierFreeError, ValueError):
    """Derivative order larger than the spline degree (or negative)."""


class SizeError(OutlierFreeError, ValueError):
    """Matrix size too small for the Toeplitz/Hankel pattern, or mismatched operands."""


class ThresholdError(OutlierFreeError, ValueError):
    """Dimension below the size for which the closed-form structure is guaranteed."""

    def __init__(self, message, required=None, formula=None):
        super().__init__(message)
        self.required = required
        self.formula = formula


class DomainError(OutlierFreeError, ValueError):
    """Argument outside the admissible domain (e.g. theta outside [0, pi])."""


class SingularMatrixError(OutlierFreeError, ArithmeticError):
    """Structured solve hit a (numerically) zero eigenvalue."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index

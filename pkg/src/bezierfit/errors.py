"""Typed exceptions shared across the package."""


class BezierFitError(Exception):
    """Base class for all package-specific errors."""


class SingularDesignError(BezierFitError):
    """Design matrix (or a skeleton-level block of it) is rank deficient."""


class InsufficientStrataError(BezierFitError):
    """A stratified sample is missing a skeleton level required by the fit."""


class ConvergenceError(BezierFitError):
    """An iterative solver stopped before reaching its tolerance."""

    def __init__(self, message: str, gradient_norm: float | None = None,
                 iterations: int | None = None):
        super().__init__(message)
        self.gradient_norm = gradient_norm
        self.iterations = iterations


class DatasetParseError(BezierFitError):
    """A dataset file could not be parsed; carries row/column location."""

    def __init__(self, message: str, row: int | None = None, column: str | None = None):
        super().__init__(message)
        self.row = row
        self.column = column

"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class SplineError(ValueError):
    """Base class for every error raised by localspline."""


class InvalidGridError(SplineError):
    """Sampling points are not finite and strictly increasing."""


class OrderTooSmallError(SplineError):
    """Spline order below the supported minimum of 3."""


class GridTooSmallError(SplineError):
    """Too few sampling points for the requested construction."""


class SingularDenominatorError(SplineError):
    """A determinant or pivot that must be nonzero vanished."""


class DataLengthError(SplineError):
    """Data does not match the grid or order it is applied to."""


class DomainError(SplineError):
    """Evaluation point outside the interval of definition."""

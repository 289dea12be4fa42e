"""Local blended spline interpolation of arbitrary order.

The interpolant combines a quasi-interpolant (which reproduces polynomials
of degree below ``m``) with a local Hermite interpolant applied to its
residual.  The result interpolates every sample, matches derivatives of
orders ``1..m-1`` at both ends, reproduces polynomials of degree ``< m``
and depends only on nearby samples.

>>> import numpy as np
>>> from localspline import interpolate
>>> y = np.linspace(0.0, 1.0, 13)
>>> s = interpolate(y, y**2, m=3, derivs_a=[0.0, 2.0], derivs_b=[2.0, 2.0])
>>> round(float(s(0.37)), 12)
0.1369
>>> round(float(s.derivative(1.0, 1)), 12)
2.0
"""

__version__ = "0.1.0"

from .blend import (
    BlendedSpline,
    BlendOperator,
    apply_blend,
    build_blend,
    eval_spline,
    eval_spline_deriv,
    interpolate,
)
from .bounds import MeshStats, empirical_sup_error, error_bound, mesh_stats, mesh_stats_for
from .bspline import BSplineBasis, SplineFunction, truncated_power_oracle
from .data import HermiteData, divided_difference_derivs
from .errors import (
    DataLengthError,
    DomainError,
    GridTooSmallError,
    InvalidGridError,
    OrderTooSmallError,
    SingularDenominatorError,
    SplineError,
)
from .grid import KnotVector, RefinedKnots, SamplingGrid, boundary_knot_subsets, midpoint_knots, refined_knots
from .localinterp import LocalOperator, apply_local, build_local
from .quasi import Molecule, QuasiOperator, apply_quasi, build_quasi, quasi_values_and_endpoint_derivs

__all__ = [
    "BSplineBasis",
    "BlendOperator",
    "BlendedSpline",
    "DataLengthError",
    "DomainError",
    "GridTooSmallError",
    "HermiteData",
    "InvalidGridError",
    "KnotVector",
    "LocalOperator",
    "MeshStats",
    "Molecule",
    "OrderTooSmallError",
    "QuasiOperator",
    "RefinedKnots",
    "SamplingGrid",
    "SingularDenominatorError",
    "SplineError",
    "SplineFunction",
    "apply_blend",
    "apply_local",
    "apply_quasi",
    "boundary_knot_subsets",
    "build_blend",
    "build_local",
    "build_quasi",
    "divided_difference_derivs",
    "empirical_sup_error",
    "error_bound",
    "eval_spline",
    "eval_spline_deriv",
    "interpolate",
    "mesh_stats",
    "mesh_stats_for",
    "midpoint_knots",
    "quasi_values_and_endpoint_derivs",
    "refined_knots",
    "truncated_power_oracle",
]

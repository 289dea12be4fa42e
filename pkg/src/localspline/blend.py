"""Blending the quasi-interpolant with the local interpolant.

``P f = Q f + R (f - Q f)``: the quasi-interpolant reproduces polynomials
of degree below ``m``, and the local interpolant applied to the residual
restores exact interpolation at every sample and exact endpoint
derivatives.  Polynomials pass through unchanged because their residual
vanishes.

The result keeps its two spline parts on their own knot vectors (midpoint
knots and refined knots) and sums them at evaluation time.  Adding the
coefficient vectors on a common refinement is available through
:meth:`BlendedSpline.merged`, but high-order derivatives at the endpoints
are then amplified round-off of the full function value rather than of the
small residual part.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bspline import SplineFunction, refine_coefficients
from .data import DIVIDED_DIFFERENCE, EXACT, HermiteData, coerce_data, divided_difference_derivs
from .errors import DataLengthError
from .grid import SamplingGrid, as_grid, check_order
from .localinterp import LocalOperator, apply_local, build_local
from .quasi import QuasiOperator, apply_quasi, build_quasi, quasi_values_and_endpoint_derivs

__all__ = [
    "BlendOperator",
    "BlendedSpline",
    "DIVIDED_DIFFERENCE",
    "EXACT",
    "HermiteData",
    "apply_blend",
    "build_blend",
    "divided_difference_derivs",
    "eval_spline",
    "eval_spline_deriv",
    "interpolate",
    "union_knots",
]


@dataclass(frozen=True)
class BlendOperator:
    quasi: QuasiOperator
    local: LocalOperator

    def __post_init__(self):
        if self.quasi.m != self.local.m or not np.array_equal(self.quasi.grid.points, self.local.grid.points):
            raise ValueError("quasi and local operators must share grid and order")

    @property
    def m(self) -> int:
        return self.quasi.m

    @property
    def grid(self) -> SamplingGrid:
        return self.quasi.grid


def build_blend(grid, m: int) -> BlendOperator:
    grid = as_grid(grid)
    m = check_order(m)
    return BlendOperator(build_quasi(grid, m), build_local(grid, m))


def union_knots(first, second) -> np.ndarray:
    """Smallest knot multiset containing both vectors."""
    a = np.asarray(first, dtype=float)
    b = np.asarray(second, dtype=float)
    values = np.union1d(a, b)
    out = []
    for v in values:
        out += [v] * max(np.count_nonzero(a == v), np.count_nonzero(b == v))
    return np.array(out)


class BlendedSpline:
    """Sum of two splines of equal order on the same interval."""

    def __init__(self, quasi_part: SplineFunction, local_part: SplineFunction):
        if quasi_part.m != local_part.m or (quasi_part.a, quasi_part.b) != (local_part.a, local_part.b):
            raise ValueError("spline parts must share order and interval")
        self.quasi_part = quasi_part
        self.local_part = local_part
        self.m = quasi_part.m
        self.a = quasi_part.a
        self.b = quasi_part.b

    def __repr__(self) -> str:
        return f"BlendedSpline(m={self.m}, interval=[{self.a}, {self.b}])"

    def derivative(self, x, n: int = 1):
        return self.quasi_part.derivative(x, n) + self.local_part.derivative(x, n)

    def __call__(self, x):
        return self.derivative(x, 0)

    def merged(self) -> SplineFunction:
        """The same function as one :class:`SplineFunction` on the union knots."""
        knots = union_knots(self.quasi_part.knots, self.local_part.knots)
        _, cq = refine_coefficients(self.quasi_part.knots, self.quasi_part.coefs, self.m, knots)
        _, cl = refine_coefficients(self.local_part.knots, self.local_part.coefs, self.m, knots)
        return SplineFunction(knots, self.m, cq + cl)


def apply_blend(op: BlendOperator, data) -> BlendedSpline:
    data = coerce_data(data, op.grid, op.m)
    q = apply_quasi(op.quasi, data)
    values, da, db = quasi_values_and_endpoint_derivs(op.quasi, data, q)
    residual = HermiteData(data.values - values, data.derivs_a - da, data.derivs_b - db, data.provenance)
    return BlendedSpline(q, apply_local(op.local, residual))


def eval_spline(s, x):
    return s(x)


def eval_spline_deriv(s, n: int, x):
    return s.derivative(x, n)


def interpolate(points, values, m: int = 4, derivs_a=None, derivs_b=None) -> BlendedSpline:
    """Blended spline interpolant of ``values`` at ``points``.

    Endpoint derivatives default to divided-difference estimates.
    """
    grid = as_grid(points)
    values = np.asarray(values, dtype=float)
    if values.size != grid.N + 1:
        raise DataLengthError(f"expected {grid.N + 1} values, got {values.size}")
    data = HermiteData.from_samples(grid, values, m, derivs_a, derivs_b)
    return apply_blend(build_blend(grid, m), data)

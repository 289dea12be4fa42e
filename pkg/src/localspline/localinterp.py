"""Local Hermite interpolation on the refined knot vector.

Interior samples ``y_1 .. y_{N-1}`` each get a single B-spline of the
refined knots, centred on the sample and normalized to take the value one
there; its support stops at the neighbouring samples, so it vanishes at
every other sample.  At each end, ``m`` B-splines with decreasing knot
multiplicity at the endpoint are combined so that the ``l``-th molecule has
derivative ``n`` equal to ``[n == l]`` at that endpoint.  The collocation
matrix of those derivatives is triangular and is solved by substitution.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict

import numpy as np

from .bspline import SplineFunction, expand_on, single_bspline
from .data import HermiteData, coerce_data
from .errors import SingularDenominatorError
from .grid import RefinedKnots, SamplingGrid, as_grid, check_order, refined_knots
from .quasi import Molecule

BOUNDARY = "boundary"
CARDINAL = "cardinal"


def endpoint_collocation(rk: RefinedKnots, side: str) -> np.ndarray:
    """``S[n, k]``: derivative ``n`` at the endpoint of boundary B-spline ``k``.

    On the left, column ``k`` is the subset labelled ``-m+1+k``; on the right
    the column order is reversed (label ``N+m-1-k``) so both are lower
    triangular.
    """
    m, N = rk.m, rk.N
    S = np.zeros((m, m))
    for k in range(m):
        if side == "left":
            span, at, closed = rk.subsets[-m + 1 + k], rk.t[rk.t.first_index], False
        else:
            span, at, closed = rk.subsets[N + m - 1 - k], rk.t[rk.t.last_index], True
        for n in range(m):
            S[n, k] = single_bspline(span, [at], n, closed_right=closed)[0]
    return S


def forward_substitution(S: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve the lower-triangular system ``S b = rhs``."""
    size = rhs.size
    b = np.zeros(size)
    for n in range(size):
        if S[n, n] == 0.0:
            raise SingularDenominatorError(f"zero pivot at row {n} of the endpoint collocation matrix")
        b[n] = (rhs[n] - S[n, :n] @ b[:n]) / S[n, n]
    return b


def boundary_coefficients(rk: RefinedKnots, side: str) -> np.ndarray:
    """``B[l, k]``: weight of boundary B-spline ``k`` in endpoint molecule ``l``.

    Column ``k`` refers to subset ``-m+1+k`` on the left and ``N+k`` on the
    right; row ``l`` is the derivative order the molecule reproduces.
    """
    m = rk.m
    S = endpoint_collocation(rk, side)
    B = np.zeros((m, m))
    for l in range(m):
        col = forward_substitution(S, np.eye(m)[l])
        B[l] = col if side == "left" else col[::-1]
    return B


def _expand_molecule(rk: RefinedKnots, spans, weights) -> tuple:
    """Write ``sum weights[k] * N[spans[k]]`` on consecutive t-B-splines."""
    t = rk.t
    m = rk.m
    parts = [expand_on(span, t.values, m) for span in spans]
    lo = min(first for first, _ in parts)
    hi = max(first + c.size for first, c in parts)
    coefs = np.zeros(hi - lo)
    for w, (first, c) in zip(weights, parts):
        coefs[first - lo : first - lo + c.size] += w * c
    return lo + t.offset, coefs


@dataclass(frozen=True)
class LocalOperator:
    grid: SamplingGrid
    m: int
    refined: RefinedKnots
    molecules: Dict[int, Molecule]
    left_coefficients: np.ndarray
    right_coefficients: np.ndarray

    @property
    def N(self) -> int:
        return self.grid.N

    @property
    def t(self):
        return self.refined.t

    def b(self, item: int, k: int) -> float:
        """Boundary coefficient of molecule ``item`` on its ``k``-th B-spline."""
        N = self.N
        if item <= 0:
            return float(self.left_coefficients[-item, k])
        if item >= N:
            return float(self.right_coefficients[item - N, k])
        raise IndexError(f"molecule {item} is not a boundary molecule")


def build_local(grid, m: int) -> LocalOperator:
    grid = as_grid(grid)
    m = check_order(m)
    rk = refined_knots(grid, m)
    t = rk.t
    N = grid.N
    y = grid.points
    molecules: Dict[int, Molecule] = {}
    for i in range(1, N):
        s = rk.interior_start(i)
        span = t.slice(s, s + m)
        closed = span[-1] == t.values[-1]
        peak = single_bspline(span, [y[i]], 0, closed)[0]
        if peak == 0.0:
            raise SingularDenominatorError(f"B-spline for sample {i} vanishes at y_{i}")
        coefs = np.array([1.0 / peak])
        coefs.setflags(write=False)
        molecules[i] = Molecule(i, coefs, s, (float(span[0]), float(span[-1])), (CARDINAL,))

    left = boundary_coefficients(rk, "left")
    right = boundary_coefficients(rk, "right")
    left_spans = [rk.subsets[-m + 1 + k] for k in range(m)]
    right_spans = [rk.subsets[N + k] for k in range(m)]
    for l in range(m):
        for item, spans, weights in ((-l, left_spans, left[l]), (N + l, right_spans, right[l])):
            offset, coefs = _expand_molecule(rk, spans, weights)
            coefs.setflags(write=False)
            lo, hi = t[offset], t[offset + coefs.size - 1 + m]
            molecules[item] = Molecule(item, coefs, offset, (lo, hi), (BOUNDARY,) * coefs.size)
    return LocalOperator(grid, m, rk, dict(sorted(molecules.items())), left, right)


def local_coefficients(op: LocalOperator, data: HermiteData) -> np.ndarray:
    """B-spline coefficients on ``t`` of ``sum_i data_i L_i``."""
    t = op.t
    vec = data.items()
    base = op.m - 1
    out = np.zeros(t.n_basis)
    for item, mol in op.molecules.items():
        p = mol.basis_offset - t.offset
        out[p : p + mol.coefficients.size] += vec[item + base] * mol.coefficients
    return out


def apply_local(op: LocalOperator, data) -> SplineFunction:
    data = coerce_data(data, op.grid, op.m)
    return SplineFunction(op.t, op.m, local_coefficients(op, data))

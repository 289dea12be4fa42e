"""Quasi-interpolation on midpoint knots.

Every B-spline coefficient of the quasi-interpolant is the blossom, at
``m - 1`` consecutive midpoint knots, of the polynomial that interpolates
the data on a window of ``m`` sampling points.  Near the ends the window is
padded by repeating ``y_0`` (or ``y_N``), which turns repeated nodes into
derivative conditions.  Solving for the blossom by Cramer's rule gives the
molecule coefficients as ratios of (confluent) Vandermonde determinants.

The determinants are evaluated in coordinates local to each window
(shifted and scaled to roughly ``[-1, 1]``).  Blossoms commute with affine
changes of variable, so this changes nothing mathematically but keeps the
matrices well conditioned on fine grids.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from .bspline import SplineFunction, basis_matrix
from .data import HermiteData, coerce_data
from .errors import GridTooSmallError
from .grid import KnotVector, SamplingGrid, as_grid, check_order, midpoint_knots
from .symfun import xi_from_values
from .vandermonde import NodeSpec, cramer_weights

INTERIOR = "interior"
LEFT_CONFLUENT = "left-confluent"
LEFT_DERIVATIVE = "left-derivative"
RIGHT_CONFLUENT = "right-confluent"
RIGHT_DERIVATIVE = "right-derivative"


@dataclass(frozen=True)
class Molecule:
    """``sum_j coefficients[j] * N_{basis_offset + j}`` multiplying one data item."""

    item: int
    coefficients: np.ndarray
    basis_offset: int
    support: Tuple[float, float]
    cases: Tuple[str, ...] = ()

    def evaluate(self, knots: KnotVector, x, n: int = 0) -> np.ndarray:
        m = knots.m
        count = self.coefficients.size
        span = knots.slice(self.basis_offset, self.basis_offset + count - 1 + m)
        closed = span[-1] == knots.values[-1]
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return basis_matrix(span, m, x, n, closed) @ self.coefficients


def coefficient_case(i: int, j: int, N: int, m: int) -> str:
    """Which itemized coefficient rule covers molecule ``i``, entry ``j``.

    Raises ``AssertionError`` unless exactly one rule applies.
    """
    rules = []
    if 0 <= i <= m - 2 and m - 1 - i <= j <= m - 1:
        rules.append(INTERIOR)
    if m - 1 <= i <= N + 1 - m and 0 <= j <= m - 1:
        rules.append(INTERIOR)
    if N - m + 2 <= i <= N and 0 <= j <= N - i:
        rules.append(INTERIOR)
    if 0 <= i <= m - 2 and 0 <= j <= m - 2 - i:
        rules.append(LEFT_CONFLUENT)
    if 1 <= -i <= m - 1 and 0 <= j <= m - 1 + i:
        rules.append(LEFT_DERIVATIVE)
    if N - m + 2 <= i <= N and N - i + 1 <= j <= m - 1:
        rules.append(RIGHT_CONFLUENT)
    if 1 <= i - N <= m - 1 and i - N <= j <= m - 1:
        rules.append(RIGHT_DERIVATIVE)
    if len(rules) != 1:
        raise AssertionError(f"coefficient ({i}, {j}) matched {len(rules)} rules: {rules}")
    return rules[0]


def window_nodes(k: int, N: int, m: int) -> List[Tuple[int, int]]:
    """Sample indices with confluency for the window of B-spline ``k``.

    The window is ``y_k .. y_{k+m-1}`` with indices below 0 folded onto
    ``y_0`` and indices above ``N`` folded onto ``y_N``.
    """
    lo, hi = max(k, 0), min(k + m - 1, N)
    nodes = [[i, 0] for i in range(lo, hi + 1)]
    if k < 0:
        nodes[0][1] = -k
    if k + m - 1 > N:
        nodes[-1][1] = k + m - 1 - N
    return [tuple(n) for n in nodes]


def _column_items(nodes, N: int) -> List[Tuple[int, int]]:
    """(data item, derivative order) for each matrix column, in column order."""
    out = []
    for i, q in nodes:
        out.append((i, 0))
        for d in range(1, q + 1):
            out.append((-d if i == 0 else N + d, d))
    return out


def _local_frame(y: np.ndarray, nodes) -> Tuple[float, float]:
    lo, hi = y[nodes[0][0]], y[nodes[-1][0]]
    if hi > lo:
        return 0.5 * (lo + hi), 0.5 * (hi - lo)
    if nodes[0][0] == 0:
        return lo, y[1] - y[0]
    return lo, y[-1] - y[-2]


def window_weights(y: np.ndarray, x: KnotVector, m: int, k: int):
    """Data items and weights whose combination is coefficient ``c_k``."""
    N = y.size - 1
    nodes = window_nodes(k, N, m)
    center, scale = _local_frame(y, nodes)
    spec = NodeSpec([((y[i] - center) / scale, q) for i, q in nodes])
    knots = (x.slice(k + 1, k + m - 1) - center) / scale
    w = cramer_weights(spec, xi_from_values(knots))
    cols = _column_items(nodes, N)
    items = [item for item, _ in cols]
    weights = [w[p] * scale**d for p, (_, d) in enumerate(cols)]
    return items, weights


def _molecule_slot(item: int, k: int, N: int, m: int) -> int:
    if item < 0:
        return k + m - 1
    if item > N:
        return k - N + m - 1
    return k - item + m - 1


def _molecule_offset(item: int, N: int, m: int) -> int:
    if item < 0:
        return -m + 1
    if item > N:
        return N - m + 1
    return item - m + 1


@dataclass(frozen=True)
class QuasiOperator:
    """Precomputed molecules of the quasi-interpolant for one grid and order."""

    grid: SamplingGrid
    m: int
    x: KnotVector
    molecules: Dict[int, Molecule]
    windows: Tuple[Tuple[Tuple[int, ...], Tuple[float, ...]], ...] = field(repr=False)

    @property
    def N(self) -> int:
        return self.grid.N

    def molecule(self, item: int) -> Molecule:
        return self.molecules[item]


def _support(item: int, x: KnotVector, N: int, m: int) -> Tuple[float, float]:
    if item < 0:
        return x[0], x[m + item]
    if item > N:
        return x[N - m + 1 + (item - N)], x[N + 1]
    return x[item - m + 1], x[item + m]


def build_quasi(grid, m: int) -> QuasiOperator:
    """All molecule coefficients of the quasi-interpolant; needs ``N >= 3m - 3``."""
    grid = as_grid(grid)
    m = check_order(m)
    N = grid.N
    if N < 3 * m - 3:
        raise GridTooSmallError(f"quasi-interpolation requires N >= 3m-3 = {3 * m - 3}, got N={N}")
    x = midpoint_knots(grid, m)
    y = grid.points
    coefs: Dict[int, np.ndarray] = {}
    for item in range(-m + 1, N + m):
        size = m - (-item if item < 0 else item - N if item > N else 0)
        coefs[item] = np.full(size, np.nan)
    windows = []
    for k in range(-m + 1, N + 1):
        items, weights = window_weights(y, x, m, k)
        windows.append((tuple(items), tuple(weights)))
        for item, w in zip(items, weights):
            slot = _molecule_slot(item, k, N, m)
            if item > N:
                slot -= item - N
            coefs[item][slot] = w
    molecules = {}
    for item, c in coefs.items():
        if np.any(np.isnan(c)):
            raise AssertionError(f"molecule {item} not fully assigned")
        first_j = item - N if item > N else 0
        cases = tuple(coefficient_case(item, first_j + s, N, m) for s in range(c.size))
        c.setflags(write=False)
        molecules[item] = Molecule(item, c, _molecule_offset(item, N, m) + first_j, _support(item, x, N, m), cases)
    return QuasiOperator(grid, m, x, molecules, tuple(windows))


def quasi_coefficients(op: QuasiOperator, data: HermiteData) -> np.ndarray:
    """B-spline coefficients of the quasi-interpolant on ``op.x``."""
    vec = data.items()
    base = op.m - 1
    out = np.empty(len(op.windows))
    for k, (items, weights) in enumerate(op.windows):
        acc = 0.0
        for item, w in zip(items, weights):
            acc += w * vec[item + base]
        out[k] = acc
    return out


def apply_quasi(op: QuasiOperator, data) -> SplineFunction:
    data = coerce_data(data, op.grid, op.m)
    return SplineFunction(op.x, op.m, quasi_coefficients(op, data))


def quasi_values_and_endpoint_derivs(op: QuasiOperator, data, spline: SplineFunction | None = None):
    """``(Qf)(y_i)`` for all samples and ``(Qf)^(l)`` at ``a`` and ``b``, ``l = 1..m-1``."""
    if spline is None:
        spline = apply_quasi(op, data)
    y = op.grid.points
    values = spline(y)
    da = np.array([spline.derivative(op.grid.a, l) for l in range(1, op.m)])
    db = np.array([spline.derivative(op.grid.b, l) for l in range(1, op.m)])
    return values, da, db

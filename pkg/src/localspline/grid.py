"""Sampling grids and the two knot sequences built from them.

Two knot vectors are derived from the samples ``y_0 < ... < y_N``:

* the *midpoint* vector ``x`` used by the quasi-interpolant, with knots
  halfway between consecutive samples and ``m``-fold stacked ends;
* the *refined* vector ``t`` used by the local interpolant, which contains
  every sample as a knot, extra equally spaced knots between samples and
  ``m - 1`` extra knots in each of the two boundary intervals.

Knot vectors carry an index offset so the logical indices used in the
formulas (``x_{-m+1}``, ``t_{-m+1}``, ...) can be used verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Sequence

import numpy as np

from .errors import GridTooSmallError, InvalidGridError, OrderTooSmallError

MIN_ORDER = 3


def check_order(m: int) -> int:
    if int(m) != m:
        raise OrderTooSmallError(f"order must be an integer, got {m!r}")
    m = int(m)
    if m < MIN_ORDER:
        raise OrderTooSmallError(f"order m={m} is too small: requires m >= {MIN_ORDER}")
    return m


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SamplingGrid:
    """Strictly increasing sampling points ``y_0 < y_1 < ... < y_N``."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1:
            raise InvalidGridError("sampling points must form a 1-D sequence")
        if pts.size < 2:
            raise InvalidGridError("at least two sampling points are required (N >= 1)")
        if not np.all(np.isfinite(pts)):
            raise InvalidGridError("sampling points must be finite")
        gaps = np.diff(pts)
        if np.any(gaps <= 0):
            bad = int(np.argmax(gaps <= 0))
            raise InvalidGridError(
                f"sampling points must be strictly increasing: y[{bad}]={pts[bad]!r} "
                f">= y[{bad + 1}]={pts[bad + 1]!r}"
            )
        object.__setattr__(self, "points", _frozen(pts))

    @property
    def N(self) -> int:
        return self.points.size - 1

    @property
    def a(self) -> float:
        return float(self.points[0])

    @property
    def b(self) -> float:
        return float(self.points[-1])

    def __len__(self) -> int:
        return self.points.size

    def __getitem__(self, i):
        return self.points[i]


def as_grid(points) -> SamplingGrid:
    return points if isinstance(points, SamplingGrid) else SamplingGrid(np.asarray(points, dtype=float))


@dataclass(frozen=True)
class KnotVector:
    """Non-decreasing knots addressed by logical index.

    ``values[p]`` holds the knot with logical index ``p + offset``; B-spline
    ``j`` of order ``m`` lives on logical knots ``j, ..., j + m``.
    """

    values: np.ndarray
    offset: int
    m: int

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or vals.size < self.m + 1:
            raise InvalidGridError(f"a knot vector of order {self.m} needs at least {self.m + 1} knots")
        if np.any(np.diff(vals) < 0):
            raise InvalidGridError("knots must be non-decreasing")
        object.__setattr__(self, "values", _frozen(vals))

    def __getitem__(self, i: int) -> float:
        p = i - self.offset
        if not 0 <= p < self.values.size:
            raise IndexError(f"knot index {i} outside [{self.first_index}, {self.last_index}]")
        return float(self.values[p])

    def __len__(self) -> int:
        return self.values.size

    @property
    def first_index(self) -> int:
        return self.offset

    @property
    def last_index(self) -> int:
        return self.offset + self.values.size - 1

    @property
    def n_basis(self) -> int:
        return self.values.size - self.m

    @property
    def first_basis(self) -> int:
        return self.offset

    def span(self, j: int) -> np.ndarray:
        """The ``m + 1`` knots supporting B-spline ``j``."""
        p = j - self.offset
        if not 0 <= p <= self.values.size - self.m - 1:
            raise IndexError(f"B-spline index {j} out of range")
        return self.values[p : p + self.m + 1]

    def slice(self, lo: int, hi: int) -> np.ndarray:
        """Knots with logical indices ``lo..hi`` inclusive."""
        return self.values[lo - self.offset : hi - self.offset + 1]


def midpoint_knots(grid, m: int) -> KnotVector:
    """Knots midway between samples, ends stacked ``m`` times.

    ``x_0 = y_0``, ``x_i = (y_{i-1} + y_i)/2`` for ``1 <= i <= N``,
    ``x_{N+1} = y_N``; logical indices run from ``-m+1`` to ``N+m``.
    """
    grid = as_grid(grid)
    m = check_order(m)
    y = grid.points
    mids = 0.5 * (y[:-1] + y[1:])
    values = np.concatenate([np.full(m, y[0]), mids, np.full(m, y[-1])])
    return KnotVector(values, offset=-(m - 1), m=m)


def _equal_inner(left: float, right: float, count: int) -> list:
    """``count - 1`` points splitting ``(left, right)`` into ``count`` equal parts."""
    pts = []
    step = (right - left) / count
    for i in range(1, count):
        # keep an exact midpoint bit-identical to the matching midpoint knot
        pts.append(0.5 * (left + right) if 2 * i == count else left + i * step)
    return pts


def _inserted_count(j: int, m: int) -> int:
    """Knots inserted strictly inside the interior interval ``(y_j, y_{j+1})``."""
    if m % 2 == 0:
        return m // 2 - 1
    r = (m + 1) // 2
    return r - 1 if j % 2 == 0 else r - 2


def anchor_index(j: int, m: int) -> int:
    """Logical t-index of the knot equal to ``y_j`` for ``1 <= j <= N-1``."""
    if m % 2 == 0:
        return m + (j - 1) * (m // 2)
    r = (m + 1) // 2
    return m + (j - 1) * r - j // 2


def spread_indices(m: int, k: int) -> list:
    """Offsets in ``0..m`` of ``m + 1 - k`` evenly spread knots (both ends kept)."""
    count = m - k
    picks = []
    for j in range(count + 1):
        idx = int(np.floor(j * m / count + 0.5))
        if picks and idx <= picks[-1]:
            idx = picks[-1] + 1
        picks.append(idx)
    return picks


@dataclass(frozen=True)
class RefinedKnots:
    """The refined knot vector ``t`` with its sample anchors.

    ``anchors[j]`` is the logical t-index of the knot equal to ``y_j``
    (``0`` for ``y_0`` and the first stacked copy of ``b`` for ``y_N``).
    """

    t: KnotVector
    anchors: Dict[int, int]
    m: int
    N: int
    subsets: Dict[int, np.ndarray] = field(default_factory=dict)

    @property
    def right_base(self) -> int:
        """Logical index of ``y_{N-1}``; the right boundary block starts here."""
        return self.anchors[self.N - 1]

    @property
    def end_index(self) -> int:
        """Logical index of the first knot equal to ``y_N``."""
        return self.anchors[self.N]

    def interior_start(self, i: int) -> int:
        """First knot index of the single B-spline used for sample ``i``.

        For ``2 <= i <= N-1`` this is the anchor of ``y_{i-1}``; for ``i = 1``
        the B-spline is centred on ``y_1`` and starts inside ``(y_0, y_1)``.
        """
        m = self.m
        if i == 1:
            return m - (m // 2 if m % 2 == 0 else (m + 1) // 2)
        if 2 <= i <= self.N - 1:
            return self.anchors[i - 1]
        raise IndexError(f"no interior molecule for sample {i}")


def refined_knots(grid, m: int) -> RefinedKnots:
    """Build the refined knot vector ``t`` for the local interpolant."""
    grid = as_grid(grid)
    m = check_order(m)
    N = grid.N
    if N < 3:
        raise GridTooSmallError(f"refined knots require N >= 3 sampling intervals, got N={N}")
    y = grid.points
    knots = [y[0]] * m  # t_{-m+1}, ..., t_0
    knots += _equal_inner(y[0], y[1], m)
    anchors = {0: 0}
    for j in range(1, N - 1):
        anchors[j] = len(knots) - (m - 1)
        knots.append(y[j])
        knots += _equal_inner(y[j], y[j + 1], _inserted_count(j, m) + 1)
    anchors[N - 1] = len(knots) - (m - 1)
    knots.append(y[N - 1])
    knots += _equal_inner(y[N - 1], y[N], m)
    anchors[N] = len(knots) - (m - 1)
    knots += [y[N]] * m
    t = KnotVector(np.array(knots), offset=-(m - 1), m=m)
    for j in range(1, N):
        if anchors[j] != anchor_index(j, m):
            raise AssertionError(f"anchor mismatch for y_{j}")
    rk = RefinedKnots(t=t, anchors=anchors, m=m, N=N)
    object.__setattr__(rk, "subsets", dict(boundary_knot_subsets(rk)))
    return rk


def boundary_knot_subsets(rk: RefinedKnots, m: int | None = None, N: int | None = None) -> list:
    """The ``m + 1``-knot sequences ``t_{-k}``, ``t_1``, ``t_{N-1}``, ``t_{N+k}``.

    Returned as ``(label, knots)`` pairs with ``label`` in
    ``-m+1..1`` and ``N-1..N+m-1``.
    """
    m = rk.m if m is None else m
    N = rk.N if N is None else N
    t = rk.t
    out = []
    for k in range(m - 1, -1, -1):
        chosen = [t[p] for p in spread_indices(m, k)]
        out.append((-k, np.array([t[0]] * k + chosen)))
    s1 = rk.interior_start(1)
    out.append((1, np.array(t.slice(s1, s1 + m))))
    s = rk.interior_start(N - 1)
    out.append((N - 1, np.array(t.slice(s, s + m))))
    base = rk.right_base
    for k in range(m):
        chosen = sorted(t[base + m - p] for p in spread_indices(m, k))
        out.append((N + k, np.array(chosen + [t[base + m]] * k)))
    return out


def knot_multiplicity(knots: Sequence[float], value: float) -> int:
    return int(np.count_nonzero(np.asarray(knots) == value))

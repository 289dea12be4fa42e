"""Mesh diagnostics and a-priori error bounds for the blended interpolant.

The error bound on the knot interval ``[x_i, x_{i+1}]`` is
``max|f^(m)| * K`` where ``K`` depends on the mesh only, through

* ``gamma``: the largest distance between a midpoint knot and the sample
  it is paired with,
* ``delta``: the smallest sample gap (capped at 1),
* ``epsilon``: the largest midpoint-knot gap,
* ``rho`` and ``lambda``: the largest boundary sample gap (at least 1)
  and the smallest refined-knot gap (at most 1),
* ``tau``: a bound on the endpoint-molecule coefficients.

Four formulas apply depending on where the interval lies: near ``a``
(``U``), in the interior (``V``), approaching ``b`` (``W``) and at ``b``
(``X``).  The multiplying constants depend only on ``m``.  Those that the
derivation leaves as unnamed constants are closed here by the finite power
sums that appear in it (see :func:`constants`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict

import numpy as np

from .grid import KnotVector, RefinedKnots, as_grid, check_order, midpoint_knots, refined_knots

REGIONS = ("U", "V", "W", "X")


@dataclass(frozen=True)
class MeshStats:
    gamma: float
    delta: float
    epsilon: float
    rho: float
    lam: float
    tau: float
    m: int
    N: int

    @property
    def ratio(self) -> float:
        """``gamma / delta``, the quantity that governs coefficient growth."""
        return self.gamma / self.delta

    @property
    def two_over_delta(self) -> float:
        return 2.0 / self.delta

    def as_dict(self) -> Dict[str, float]:
        return {
            "m": self.m,
            "N": self.N,
            "gamma": self.gamma,
            "delta": self.delta,
            "epsilon": self.epsilon,
            "rho": self.rho,
            "lambda": self.lam,
            "tau": self.tau,
            "gamma_over_delta": self.ratio,
            "two_over_delta": self.two_over_delta,
        }


def tau_value(rho: float, lam: float, m: int) -> float:
    f = math.factorial
    inner = rho ** (m - 1) * f(m - 1) * f(m - 2) / lam ** (m - 1)
    return max(1.0, rho ** (m - 1) / (m - 1), f(m) * inner**m)


def mesh_stats(grid, x: KnotVector, rk: RefinedKnots, m: int) -> MeshStats:
    grid = as_grid(grid)
    m = check_order(m)
    y = grid.points
    N = grid.N
    gamma = max(abs(x[n] - y[max(n - m + 1, 0)]) for n in range(0, N + m))
    gaps = np.diff(y)
    delta = min(1.0, float(gaps.min()))
    epsilon = max(x[n + 1] - x[n] for n in range(0, N + 1))
    rho = max(1.0, float(gaps[0]), float(gaps[-1]))
    tgaps = np.diff(rk.t.values)
    lam = min(1.0, float(tgaps[tgaps > 0].min()))
    return MeshStats(float(gamma), delta, float(epsilon), rho, lam, tau_value(rho, lam, m), m, N)


def mesh_stats_for(grid, m: int) -> MeshStats:
    """:func:`mesh_stats` with the knot vectors built from ``grid``."""
    grid = as_grid(grid)
    return mesh_stats(grid, midpoint_knots(grid, m), refined_knots(grid, m), m)


def _power_sum(lo: int, hi: int, p: int) -> int:
    return sum(k**p for k in range(lo, hi + 1))


def constants(m: int) -> Dict[str, float]:
    """The constants ``A1..A6, B1, B2, C1..C3, D1..D6`` for order ``m``.

    ``A2, A3, B2, C2`` are the power sums left symbolic in the derivation,
    each divided by ``(m-1)!`` from the Taylor remainder:

    * ``A2``: ``[sum_{k=2}^{m+1} k^(m-1) + 3m sum_{k=2}^{m+2} k^(m-1)] / (m-2)!``
    * ``A3``: ``m^2 sum_{k=2}^{m-1} k^(m-1) / (m-2)!``
    * ``B2``: ``[S(m-1) + 2 S(m) + S(m+1)] / (m-2)!`` with ``S(n) = sum_{k=1}^n k^(m-1)``
    * ``C2``: ``4 S(m-1) / (m-2)!``
    """
    f = math.factorial
    p = m - 1
    fm1, fm2 = f(m - 1), f(m - 2)
    g = fm1 ** (m - 3)
    S = lambda n: _power_sum(1, n, p)  # noqa: E731
    c = {
        "A1": (1 + m * 2**p + m * 3**p) / fm1,
        "A2": (_power_sum(2, m + 1, p) + 3 * m * _power_sum(2, m + 2, p)) / fm2 / fm1,
        "A3": m * m * _power_sum(2, m - 1, p) / fm2 / fm1,
        "A4": (m + 1) / fm2,
        "A5": m * m * (m - 1) / fm2,
        "A6": float(m),
        "B1": (2 + 2**p) / fm1,
        "B2": (S(m - 1) + 2 * S(m) + S(m + 1)) / fm2 / fm1,
        "C3": 4 * (m - 1) * g / fm2,
        "D1": (1 + m + m * 2**p) / fm1,
        "D2": (1 + 2**p + 3 * m + 3 * m * 2**p) / (fm2 * fm1),
        "D3": (1 + 2**p) * m * m * (m - 1) / (fm1 * fm2),
        "D4": (6 * m + 2) * g / fm2,
        "D5": 2 * m * g,
        "D6": 2 * m * m * (m - 1) * g / fm2,
    }
    c["C1"] = c["B1"]
    c["C2"] = 4 * S(m - 1) / fm2 / fm1
    return c


def region_of(i: int, N: int, m: int) -> str:
    """Which bound formula covers the knot interval ``[x_i, x_{i+1}]``."""
    if not 0 <= i <= N:
        raise IndexError(f"knot interval {i} outside 0..{N}")
    if i <= 1:
        return "U"
    if i <= N - m + 1:
        return "V"
    if i <= N - 2:
        return "W"
    return "X"


def region_factor(stats: MeshStats, region: str) -> float:
    """The mesh-dependent factor multiplying ``max|f^(m)|`` for a region."""
    m = stats.m
    c = constants(m)
    eps = stats.epsilon
    r = stats.ratio ** (m - 1)
    two = stats.two_over_delta ** (m - 1)
    tau = stats.tau
    geo = sum(eps**k for k in range(m - 1))  # (1 - eps^(m-1)) / (1 - eps)
    em = eps**m
    if region == "U":
        return em * (c["A1"] + c["A2"] * r + c["A3"] * tau * r * two) + eps * (
            c["A4"] * r + c["A5"] * tau * r * two + c["A6"] * tau
        )
    if region == "V":
        return em * (c["B1"] + c["B2"] * r)
    if region == "W":
        return em * (c["C1"] + c["C2"] * r) + eps * c["C3"] * r * geo
    if region == "X":
        return em * (c["D1"] + c["D2"] * r + c["D3"] * tau * r * two) + eps * (
            c["D4"] * r * geo + c["D5"] * tau * geo + c["D6"] * tau * r * two * geo
        )
    raise ValueError(f"unknown region {region!r}; expected one of {REGIONS}")


def error_bound(stats: MeshStats, m: int, region: int, f_m_norm: float) -> float:
    """Bound on ``|f - P f|`` over knot interval ``region`` given ``max|f^(m)|`` there."""
    if m != stats.m:
        raise ValueError(f"stats were computed for m={stats.m}, not m={m}")
    return f_m_norm * region_factor(stats, region_of(region, stats.N, m))


def coefficient_bound(stats: MeshStats) -> float:
    """Bound on every quasi-interpolation coefficient (and molecule value)."""
    return stats.ratio ** (stats.m - 1) / math.factorial(stats.m - 2)


molecule_bound = coefficient_bound


def molecule_derivative_bound(stats: MeshStats) -> float:
    """Bound on endpoint derivatives of the quasi-interpolation molecules."""
    return stats.m * coefficient_bound(stats) * stats.two_over_delta ** (stats.m - 1)


def local_molecule_bound(stats: MeshStats, boundary: bool) -> float:
    return stats.m * stats.tau if boundary else 1.0


def endpoint_bspline_derivative_bounds(stats: MeshStats):
    """``(lower, upper)`` on endpoint derivatives of the boundary B-splines."""
    m = stats.m
    lower = (m - 1) / stats.rho ** (m - 1)
    upper = math.factorial(m - 1) ** 2 / stats.lam ** (m - 1)
    return lower, upper


def empirical_sup_error(f: Callable, s, interval, samples_per_interval: int) -> float:
    """``max |f - s|`` over ``samples_per_interval + 1`` equispaced points of ``interval``."""
    lo, hi = interval
    if samples_per_interval < 1:
        raise ValueError("need at least one probe subinterval")
    xs = np.linspace(lo, hi, samples_per_interval + 1)
    return float(np.max(np.abs(np.asarray(f(xs), dtype=float) - s(xs))))


def interval_bounds(stats: MeshStats, x: KnotVector, f_m_norms=None):
    """Rows ``(i, x_i, x_{i+1}, region, bound)`` for every knot interval.

    ``f_m_norms[i]`` is ``max|f^(m)|`` on interval ``i``; omitted, the bound
    is reported per unit norm.
    """
    rows = []
    for i in range(stats.N + 1):
        norm = 1.0 if f_m_norms is None else float(f_m_norms[i])
        region = region_of(i, stats.N, stats.m)
        rows.append((i, x[i], x[i + 1], region, norm * region_factor(stats, region)))
    return rows

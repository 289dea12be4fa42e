"""Elementary symmetric functions and the blossom vectors built from them."""

from __future__ import annotations

import itertools
import math
from typing import Sequence, Tuple

import numpy as np

from .grid import KnotVector


def elementary_symmetric(values: Sequence[float]) -> np.ndarray:
    """All of ``sigma^0 .. sigma^n`` of ``values`` by incremental products.

    Expands ``prod (1 + v_i z)`` one factor at a time, so the cost is
    quadratic in ``len(values)`` instead of exponential.
    """
    vals = [float(v) for v in values]
    e = np.zeros(len(vals) + 1)
    e[0] = 1.0
    for count, v in enumerate(vals, start=1):
        e[1 : count + 1] = e[1 : count + 1] + v * e[0:count]
    return e


def sigma(n: int, values: Sequence[float]) -> float:
    """Sum over all ``n``-element subsets of the product of their entries.

    ``sigma(0, .) == 1`` and ``sigma(n, v) == 0`` whenever ``n > len(v)``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > len(values):
        return 0.0
    return float(elementary_symmetric(values)[n])


def sigma_enumerate(n: int, values: Sequence[float]) -> float:
    """Subset-enumeration version of :func:`sigma` (reference only)."""
    if n > len(values):
        return 0.0
    return float(sum(math.prod(c) for c in itertools.combinations(values, n)))


def xi_from_values(values: Sequence[float]) -> np.ndarray:
    """``[sigma^n(values) / C(len, n)]`` for ``n = 0 .. len(values)``.

    For ``m - 1`` consecutive knots this is the vector whose entry ``n`` is
    the B-spline coefficient of ``x**n`` (Marsden's identity).
    """
    e = elementary_symmetric(values)
    k = len(values)
    return np.array([e[n] / math.comb(k, n) for n in range(k + 1)])


def xi_vector(x: KnotVector, m: int, ell: int) -> np.ndarray:
    """Blossom vector of knots ``x_{ell+1} .. x_{ell+m-1}`` (length ``m``)."""
    if ell + 1 < x.first_index or ell + m - 1 > x.last_index:
        raise IndexError(f"xi index {ell} needs knots {ell + 1}..{ell + m - 1}")
    return xi_from_values(x.slice(ell + 1, ell + m - 1))


def symm_identity_check(x_vals: Sequence[float], y_vals: Sequence[float]) -> Tuple[float, float]:
    """Both sides of the symmetric-function product identity.

    ``lhs = sum_l (-1)^l sigma^{m-1-l}(x) / C(m-1, l) * sigma^l(y)``;
    ``rhs = (1/(m-1)!) sum_perm prod_k (x_{perm(k)} - y_k)``, the sum taken
    over all orderings of the ``x`` values (a permanent).
    """
    if len(x_vals) != len(y_vals):
        raise ValueError("x and y sequences must have equal length")
    k = len(x_vals)
    ex = elementary_symmetric(x_vals)
    ey = elementary_symmetric(y_vals)
    lhs = sum((-1) ** l * ex[k - l] / math.comb(k, l) * ey[l] for l in range(k + 1))
    total = 0.0
    for perm in itertools.permutations(range(k)):
        total += math.prod(x_vals[p] - y for p, y in zip(perm, y_vals))
    return float(lhs), float(total / math.factorial(k))


def factor_expansion(r: float, t_vals: Sequence[float]) -> float:
    """``sum_j (-1)^j r^{n-j} sigma^j(t)``, which equals ``prod_j (r - t_j)``."""
    n = len(t_vals)
    e = elementary_symmetric(t_vals)
    return float(sum((-1) ** j * r ** (n - j) * e[j] for j in range(n + 1)))

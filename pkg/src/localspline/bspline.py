"""Normalized B-splines, spline functions and knot insertion.

Conventions: basis functions are right-continuous (support ``[t_j,
t_{j+m})``) except at the right end of the domain, where the last
non-degenerate interval is closed so that the basis sums to one at ``b``.
Quotients ``0/0`` arising from repeated knots are taken as ``0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DataLengthError, DomainError, InvalidGridError
from .grid import KnotVector


def _safe_div(num: np.ndarray, den: float) -> np.ndarray:
    if den == 0.0:
        return np.zeros_like(num)
    return num / den


def _order_one(T: np.ndarray, x: np.ndarray, closed_right: bool) -> np.ndarray:
    x = x[:, None]
    B = ((T[:-1] <= x) & (x < T[1:])).astype(float)
    if closed_right:
        nondeg = np.nonzero(T[:-1] < T[1:])[0]
        if nondeg.size:
            last = nondeg[-1]
            at_end = x[:, 0] == T[-1]
            B[at_end, :] = 0.0
            B[at_end, last] = 1.0
    return B


def basis_matrix(knots, m: int, x, n: int = 0, closed_right: bool = True) -> np.ndarray:
    """Values (``n = 0``) or ``n``-th derivatives of all order-``m`` B-splines.

    Returns an array of shape ``(len(x), len(knots) - m)``.  Values come
    from the Cox-de Boor recursion; derivatives from the order-lowering
    difference formula applied ``n`` times.
    """
    T = np.asarray(knots, dtype=float)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if not 0 <= n < m:
        raise ValueError(f"derivative order {n} outside 0..{m - 1}")
    B = _order_one(T, x, closed_right)
    for k in range(2, m - n + 1):
        nb = T.size - k
        out = np.zeros((x.size, nb))
        for i in range(nb):
            left = _safe_div((x - T[i]) * B[:, i], T[i + k - 1] - T[i])
            right = _safe_div((T[i + k] - x) * B[:, i + 1], T[i + k] - T[i + 1])
            out[:, i] = left + right
        B = out
    for k in range(m - n + 1, m + 1):
        nb = T.size - k
        out = np.zeros((x.size, nb))
        for i in range(nb):
            out[:, i] = (k - 1) * (
                _safe_div(B[:, i], T[i + k - 1] - T[i]) - _safe_div(B[:, i + 1], T[i + k] - T[i + 1])
            )
        B = out
    return B


def single_bspline(span: Sequence[float], x, n: int = 0, closed_right: bool = False) -> np.ndarray:
    """One B-spline of order ``len(span) - 1`` (or its derivative) at ``x``.

    ``closed_right`` selects the left limit at the last knot; use it when
    the span ends at the right end of the domain.
    """
    span = np.asarray(span, dtype=float)
    m = span.size - 1
    if span[-1] <= span[0]:
        raise InvalidGridError("degenerate B-spline span")
    return basis_matrix(span, m, x, n, closed_right)[:, 0]


@dataclass(frozen=True)
class BSplineBasis:
    """The B-splines ``N_{m,j}`` on a :class:`KnotVector`, by logical index."""

    knots: KnotVector

    @property
    def m(self) -> int:
        return self.knots.m

    @property
    def indices(self) -> range:
        return range(self.knots.first_basis, self.knots.first_basis + self.knots.n_basis)

    def _check(self, j: int, x) -> np.ndarray:
        if j not in self.indices:
            raise IndexError(f"B-spline index {j} outside {self.indices.start}..{self.indices.stop - 1}")
        x = np.asarray(x, dtype=float)
        a, b = self.knots.values[0], self.knots.values[-1]
        if np.any((x < a) | (x > b)):
            raise DomainError(f"evaluation point outside [{a}, {b}]")
        return x

    def eval(self, j: int, x):
        return self.eval_deriv(j, 0, x)

    def eval_deriv(self, j: int, n: int, x):
        x = self._check(j, x)
        if not 0 <= n <= self.m - 1:
            raise ValueError(f"derivative order {n} outside 0..{self.m - 1}")
        span = self.knots.span(j)
        closed = span[-1] == self.knots.values[-1]
        vals = basis_matrix(span, self.m, np.atleast_1d(x), n, closed)[:, 0]
        return float(vals[0]) if np.ndim(x) == 0 else vals

    def matrix(self, x, n: int = 0) -> np.ndarray:
        return basis_matrix(self.knots.values, self.m, x, n)


def _positive_power(u: Fraction, p: int) -> Fraction:
    if p == 0:
        return Fraction(1) if u > 0 else Fraction(0)
    return u**p if u > 0 else Fraction(0)


def truncated_power_oracle(knot_span: Sequence[float], x: float) -> float:
    """``(t_m - t_0) [t_0, ..., t_m] (. - x)_+^(m-1)`` in exact rational arithmetic.

    Repeated knots use derivative values of the truncated power in the
    divided-difference table.  Independent of the recursion in
    :func:`basis_matrix`; intended for cross-checking it.
    """
    z = [Fraction(float(v)) for v in knot_span]
    m = len(z) - 1
    if any(z[i + 1] < z[i] for i in range(m)):
        raise InvalidGridError("knot span must be non-decreasing")
    if z[-1] == z[0]:
        raise InvalidGridError("degenerate knot span")
    X = Fraction(float(x))
    p = m - 1

    def g(u: Fraction, d: int) -> Fraction:
        return Fraction(math.perm(p, d)) * _positive_power(u - X, p - d)

    table = [g(u, 0) for u in z]
    for level in range(1, m + 1):
        nxt = []
        for i in range(m + 1 - level):
            lo, hi = z[i], z[i + level]
            if hi == lo:
                nxt.append(g(lo, level) / math.factorial(level))
            else:
                nxt.append((table[i + 1] - table[i]) / (hi - lo))
        table = nxt
    return float((z[-1] - z[0]) * table[0])


def _deboor(T: np.ndarray, c: np.ndarray, k: int, x: np.ndarray) -> np.ndarray:
    n = c.size
    mu = np.clip(np.searchsorted(T, x, side="right") - 1, k - 1, n - 1)
    d = np.stack([c[mu - k + 1 + j] for j in range(k)], axis=1)
    for r in range(1, k):
        for j in range(k - 1, r - 1, -1):
            i = mu - k + 1 + j
            alpha = (x - T[i]) / (T[i + k - r] - T[i])
            d[:, j] = (1.0 - alpha) * d[:, j - 1] + alpha * d[:, j]
    return d[:, k - 1]


def derivative_coefficients(T: np.ndarray, c: np.ndarray, k: int):
    """Knots and coefficients of the derivative of an order-``k`` spline."""
    n = c.size
    out = np.zeros(n - 1)
    for i in range(n - 1):
        den = T[i + k] - T[i + 1]
        out[i] = 0.0 if den == 0.0 else (k - 1) * (c[i + 1] - c[i]) / den
    return T[1:-1], out


class SplineFunction:
    """``sum_j c_j N_{m,j}`` on a knot vector with ``m``-fold stacked ends."""

    def __init__(self, knots, m: int, coefs):
        T = np.asarray(knots.values if isinstance(knots, KnotVector) else knots, dtype=float)
        c = np.asarray(coefs, dtype=float)
        if c.size != T.size - m:
            raise DataLengthError(f"{T.size} knots of order {m} need {T.size - m} coefficients, got {c.size}")
        self.knots = T
        self.m = int(m)
        self.coefs = c
        self.a = float(T[0])
        self.b = float(T[-1])
        self._derivs = {0: (T, c)}

    def __repr__(self) -> str:
        return f"SplineFunction(m={self.m}, n_coefs={self.coefs.size}, interval=[{self.a}, {self.b}])"

    def _deriv_data(self, n: int):
        if n not in self._derivs:
            T, c = self._deriv_data(n - 1)
            self._derivs[n] = derivative_coefficients(T, c, self.m - n + 1)
        return self._derivs[n]

    def derivative(self, x, n: int = 1):
        if not 0 <= n <= self.m - 1:
            raise ValueError(f"derivative order {n} outside 0..{self.m - 1}")
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        if np.any((xs < self.a) | (xs > self.b)):
            raise DomainError(f"evaluation point outside [{self.a}, {self.b}]")
        T, c = self._deriv_data(n)
        vals = _deboor(T, c, self.m - n, xs)
        return float(vals[0]) if np.ndim(x) == 0 else vals

    def __call__(self, x):
        return self.derivative(x, 0)

    def refine(self, new_knots) -> "SplineFunction":
        """Same function on a finer knot vector containing the current one."""
        T, c = refine_coefficients(self.knots, self.coefs, self.m, new_knots)
        return SplineFunction(T, self.m, c)


def insert_knot(T: np.ndarray, c: np.ndarray, k: int, z: float):
    """Boehm insertion of one knot ``z`` into an order-``k`` spline."""
    T = np.asarray(T, dtype=float)
    c = np.asarray(c, dtype=float)
    n = c.size
    if not T[0] < z < T[-1]:
        raise ValueError("inserted knot must lie strictly inside the knot range")
    mu = int(np.searchsorted(T, z, side="right") - 1)
    p = k - 1
    new = np.empty(n + 1)
    for i in range(n + 1):
        if i <= mu - p:
            new[i] = c[i]
        elif i <= mu:
            alpha = (z - T[i]) / (T[i + p] - T[i])
            prev = c[i - 1] if i >= 1 else 0.0
            cur = c[i] if i < n else 0.0
            new[i] = alpha * cur + (1.0 - alpha) * prev
        else:
            new[i] = c[i - 1]
    return np.insert(T, mu + 1, z), new


def refine_coefficients(T, c, k: int, target):
    """Insert every knot of ``target`` missing from ``T`` (as a multiset)."""
    T = np.asarray(T, dtype=float)
    c = np.asarray(c, dtype=float)
    for z in _multiset_missing(T, np.asarray(target, dtype=float)):
        T, c = insert_knot(T, c, k, z)
    if T.size != np.size(target) or np.any(T != target):
        raise ValueError("target knot vector does not contain the current knots")
    return T, c


def _multiset_missing(T: np.ndarray, target: np.ndarray) -> list:
    vals, counts = np.unique(target, return_counts=True)
    have = dict(zip(*np.unique(T, return_counts=True)))
    missing = []
    for v, cnt in zip(vals, counts):
        if T[0] < v < T[-1]:
            missing += [float(v)] * (cnt - have.get(v, 0))
    return missing


def expand_on(span: Sequence[float], knots: np.ndarray, k: int):
    """Write a single B-spline on ``span`` in the basis of ``knots``.

    ``span`` must be a sub-multiset of ``knots``.  Returns ``(first, coefs)``:
    the B-spline equals ``sum_i coefs[i] N_{first + i}`` where indices are
    storage positions in ``knots``.
    """
    span = np.asarray(span, dtype=float)
    knots = np.asarray(knots, dtype=float)
    lo, hi = span[0], span[-1]
    left_mult = int(np.count_nonzero(span == lo))
    right_mult = int(np.count_nonzero(span == hi))
    inner = knots[(knots > lo) & (knots < hi)]
    block = np.concatenate([np.full(left_mult, lo), inner, np.full(right_mult, hi)])
    T, c = refine_coefficients(span, np.array([1.0]), k, block)
    first = int(np.searchsorted(knots, lo, side="right")) - left_mult
    if np.any(knots[first : first + T.size] != T):
        raise ValueError("B-spline span is not a sub-multiset of the target knots")
    return first, c

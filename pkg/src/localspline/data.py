"""Sample data with endpoint derivatives, and divided-difference estimates."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DataLengthError, GridTooSmallError
from .grid import SamplingGrid, as_grid

EXACT = "exact"
DIVIDED_DIFFERENCE = "divided-difference"


def _ro(values) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class HermiteData:
    """Values ``f(y_0..y_N)`` plus derivatives of orders ``1..m-1`` at both ends.

    ``derivs_a[l - 1]`` holds ``f^(l)(a)``; likewise ``derivs_b``.
    """

    values: np.ndarray
    derivs_a: np.ndarray
    derivs_b: np.ndarray
    provenance: str = EXACT

    def __post_init__(self):
        object.__setattr__(self, "values", _ro(self.values))
        object.__setattr__(self, "derivs_a", _ro(self.derivs_a))
        object.__setattr__(self, "derivs_b", _ro(self.derivs_b))
        if self.derivs_a.size != self.derivs_b.size:
            raise DataLengthError("derivs_a and derivs_b must have the same length")
        if self.provenance not in (EXACT, DIVIDED_DIFFERENCE):
            raise ValueError(f"unknown provenance {self.provenance!r}")

    @property
    def N(self) -> int:
        return self.values.size - 1

    @property
    def order(self) -> int:
        return self.derivs_a.size + 1

    def check(self, N: int, m: int) -> None:
        if self.values.size != N + 1:
            raise DataLengthError(f"expected {N + 1} sample values, got {self.values.size}")
        if self.derivs_a.size != m - 1:
            raise DataLengthError(f"expected {m - 1} endpoint derivatives per end, got {self.derivs_a.size}")

    def items(self) -> np.ndarray:
        """All data as one array indexed by item ``-(m-1) .. N+m-1``.

        Item ``-l`` is ``f^(l)(a)``, items ``0..N`` are samples and item
        ``N+r`` is ``f^(r)(b)``; entry ``p`` of the result is item ``p-(m-1)``.
        """
        return np.concatenate([self.derivs_a[::-1], self.values, self.derivs_b])

    @classmethod
    def from_function(cls, grid, m: int, f, derivatives) -> "HermiteData":
        """Sample ``f`` and take ``derivatives[l](a|b)`` for ``l = 1..m-1``.

        ``derivatives`` maps an order to a callable (a sequence indexed by
        ``l - 1`` works too).
        """
        grid = as_grid(grid)
        get = derivatives.__getitem__
        if not isinstance(derivatives, dict):
            get = lambda l: derivatives[l - 1]  # noqa: E731
        da = [get(l)(grid.a) for l in range(1, m)]
        db = [get(l)(grid.b) for l in range(1, m)]
        return cls(np.asarray(f(grid.points), dtype=float), da, db, EXACT)

    @classmethod
    def from_samples(cls, grid, values, m: int, derivs_a=None, derivs_b=None) -> "HermiteData":
        """Use the given derivatives, or divided differences when none are given."""
        grid = as_grid(grid)
        if derivs_a is None and derivs_b is None:
            da, db = divided_difference_derivs(grid, values, m)
            return cls(values, da, db, DIVIDED_DIFFERENCE)
        if derivs_a is None or derivs_b is None:
            raise DataLengthError("provide derivatives at both ends or at neither")
        return cls(values, derivs_a, derivs_b, EXACT)


def divided_differences(nodes, values) -> np.ndarray:
    """Newton coefficients ``[z_0], [z_0,z_1], ..., [z_0..z_n]`` of distinct nodes."""
    z = np.asarray(nodes, dtype=float)
    table = np.array(values, dtype=float)
    out = [table[0]]
    for level in range(1, z.size):
        table = (table[1:] - table[:-1]) / (z[level:] - z[:-level])
        out.append(table[0])
    return np.array(out)


def divided_difference_derivs(grid, values, m: int):
    """Estimates ``l! [y_0..y_l] f`` and ``l! [y_{N-l}..y_N] f`` for ``l = 1..m-1``."""
    grid = as_grid(grid)
    values = np.asarray(values, dtype=float)
    if values.size != grid.N + 1:
        raise DataLengthError(f"expected {grid.N + 1} values, got {values.size}")
    if grid.N < m - 1:
        raise GridTooSmallError(f"divided differences of order {m - 1} need N >= {m - 1}, got N={grid.N}")
    y = grid.points
    fwd = divided_differences(y[:m], values[:m])
    da = [math.factorial(l) * fwd[l] for l in range(1, m)]
    db = []
    for l in range(1, m):
        db.append(math.factorial(l) * divided_differences(y[-l - 1 :], values[-l - 1 :])[l])
    return np.array(da), np.array(db)


def coerce_data(data, grid: SamplingGrid, m: int) -> HermiteData:
    """Accept :class:`HermiteData` or bare sample values (derivatives estimated)."""
    if not isinstance(data, HermiteData):
        data = HermiteData.from_samples(grid, np.asarray(data, dtype=float), m)
    data.check(grid.N, m)
    return data

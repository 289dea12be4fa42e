"""Vandermonde and confluent Vandermonde determinants.

A :class:`NodeSpec` lists nodes with a confluency count each.  A node of
confluency ``q`` contributes its power column ``[1, z, z^2, ...]`` followed
by ``q`` derivative columns, the ``l``-th having entry ``k!/(k-l)! z^(k-l)``
in row ``k`` (zero for ``k < l``).  Optionally one column is replaced by an
arbitrary vector; ratios of such determinants are the quasi-interpolation
coefficients (Cramer's rule).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import DataLengthError, SingularDenominatorError


@dataclass(frozen=True)
class NodeSpec:
    nodes: Tuple[Tuple[float, int], ...]
    replaced: Optional[Tuple[int, Tuple[float, ...]]] = None

    def __init__(self, nodes, replaced=None):
        nodes = tuple((float(v), int(q)) for v, q in nodes)
        if any(q < 0 for _, q in nodes):
            raise ValueError("confluency must be non-negative")
        object.__setattr__(self, "nodes", nodes)
        if replaced is not None:
            pos, vec = replaced
            replaced = (int(pos), tuple(float(v) for v in vec))
            if not 0 <= replaced[0] < self.dim:
                raise DataLengthError(f"replaced column {pos} outside 0..{self.dim - 1}")
            if len(replaced[1]) != self.dim:
                raise DataLengthError(
                    f"replacement vector has length {len(replaced[1])}, matrix dimension is {self.dim}"
                )
        object.__setattr__(self, "replaced", replaced)

    @property
    def dim(self) -> int:
        return sum(1 + q for _, q in self.nodes)

    def without_replacement(self) -> "NodeSpec":
        return NodeSpec(self.nodes)

    def with_replacement(self, pos: int, vec) -> "NodeSpec":
        return NodeSpec(self.nodes, (pos, tuple(vec)))


def power_column(z: float, dim: int, deriv: int = 0) -> np.ndarray:
    """``d^deriv/dz^deriv [1, z, ..., z^(dim-1)]``."""
    col = np.zeros(dim)
    for k in range(deriv, dim):
        col[k] = math.perm(k, deriv) * z ** (k - deriv)
    return col


def assemble(spec: NodeSpec) -> np.ndarray:
    dim = spec.dim
    cols = []
    for z, q in spec.nodes:
        for d in range(q + 1):
            cols.append(power_column(z, dim, d))
    mat = np.column_stack(cols)
    if spec.replaced is not None:
        pos, vec = spec.replaced
        mat[:, pos] = vec
    return mat


def vandermonde_det(values: Sequence[float]) -> float:
    """``prod_{k<l} (v_l - v_k)``."""
    vals = [float(v) for v in values]
    if not vals:
        raise ValueError("at least one node is required")
    out = 1.0
    for l in range(1, len(vals)):
        for k in range(l):
            out *= vals[l] - vals[k]
    return out


def confluent_det(spec: NodeSpec) -> float:
    """Determinant of the confluent Vandermonde matrix by pivoted LU."""
    if spec.replaced is not None:
        raise ValueError("confluent_det takes a spec without a replaced column; use replaced_det")
    return float(np.linalg.det(assemble(spec)))


def confluent_det_closed_form(spec: NodeSpec) -> float:
    """Product formula for a confluent Vandermonde determinant.

    ``prod_i sf(q_i) * prod_{i<j} (z_j - z_i)^((q_i+1)(q_j+1))`` where
    ``sf(q) = 1! 2! ... q!`` accounts for the derivative scaling.
    """
    if spec.replaced is not None:
        raise ValueError("closed form applies to unreplaced specs only")
    out = 1.0
    nodes = spec.nodes
    for i, (_, q) in enumerate(nodes):
        for s in range(1, q + 1):
            out *= math.factorial(s)
    for j in range(len(nodes)):
        for i in range(j):
            zi, qi = nodes[i]
            zj, qj = nodes[j]
            out *= (zj - zi) ** ((qi + 1) * (qj + 1))
    return out


def replaced_det(spec: NodeSpec) -> float:
    """Determinant with one column swapped for ``spec.replaced``."""
    if spec.replaced is None:
        raise ValueError("replaced_det needs a replaced column")
    return float(np.linalg.det(assemble(spec)))


def coefficient_ratio(numerator: NodeSpec, denominator: NodeSpec) -> float:
    """``replaced_det(numerator) / confluent_det(denominator)``."""
    if numerator.dim != denominator.dim:
        raise DataLengthError("numerator and denominator dimensions differ")
    den = confluent_det(denominator)
    if den == 0.0 or not np.isfinite(den):
        raise SingularDenominatorError(
            "confluent Vandermonde denominator vanished: sampling points coincide"
        )
    return replaced_det(numerator) / den


def cramer_weights(spec: NodeSpec, rhs) -> np.ndarray:
    """Every column's Cramer ratio for right-hand side ``rhs``.

    Entry ``p`` is ``det(A with column p := rhs) / det(A)``.
    """
    base = spec.without_replacement()
    den = confluent_det(base)
    if den == 0.0 or not np.isfinite(den):
        raise SingularDenominatorError(
            "confluent Vandermonde denominator vanished: sampling points coincide"
        )
    return np.array([replaced_det(base.with_replacement(p, rhs)) / den for p in range(base.dim)])

"""Periodic 2-D field containers and the forward/backward difference calculus.

Grids are M x N with square pixels of side h. Axis 1 is the first array
dimension (row index i), axis 2 the second (column index j); the sample at
(i, j) approximates v(i*h, j*h). All stencils wrap periodically. Fields are
value-like: every operation returns a new field and never mutates its inputs,
so fields are safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "Scheme",
    "ScalarField",
    "VectorField",
    "MatrixField",
    "diff",
    "gradient",
    "jacobian",
    "divergence",
    "matrix_divergence",
    "det",
]


class Scheme(Enum):
    """One-sided difference stencil: forward (+) or backward (-)."""

    FORWARD = "forward"
    BACKWARD = "backward"


@dataclass(frozen=True)
class ScalarField:
    """Real samples on a periodic M x N grid with spacing h."""

    data: np.ndarray
    h: float = 1.0

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim != 2 or data.shape[0] < 2 or data.shape[1] < 2:
            raise ValueError(
                f"field must be 2-D with at least 2 samples per axis, got shape {data.shape}"
            )
        h = float(self.h)
        if not h > 0:
            raise ValueError(f"grid spacing must be positive, got {h}")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "h", h)

    @property
    def M(self) -> int:
        return self.data.shape[0]

    @property
    def N(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def like(self, data) -> "ScalarField":
        """New field with the same spacing."""
        return ScalarField(data, self.h)

    def mean(self) -> float:
        return float(self.data.mean())


def _check_same_grid(*fields):
    first = fields[0]
    for f in fields[1:]:
        if f.shape != first.shape:
            raise ValueError(f"grid shape mismatch: {f.shape} vs {first.shape}")
        if f.h != first.h:
            raise ValueError(f"grid spacing mismatch: {f.h} vs {first.h}")


@dataclass(frozen=True)
class VectorField:
    """Pair of scalar fields (c1, c2) on one grid."""

    c1: ScalarField
    c2: ScalarField

    def __post_init__(self):
        _check_same_grid(self.c1, self.c2)

    @property
    def h(self) -> float:
        return self.c1.h

    @property
    def shape(self) -> tuple[int, int]:
        return self.c1.shape

    def norm2(self) -> np.ndarray:
        """Pointwise squared magnitude c1^2 + c2^2."""
        return self.c1.data ** 2 + self.c2.data ** 2

    def magnitude(self) -> np.ndarray:
        return np.hypot(self.c1.data, self.c2.data)

    @staticmethod
    def from_arrays(a1, a2, h: float = 1.0) -> "VectorField":
        return VectorField(ScalarField(a1, h), ScalarField(a2, h))


@dataclass(frozen=True)
class MatrixField:
    """2x2 block of scalar fields on one grid. No symmetry is assumed."""

    m11: ScalarField
    m12: ScalarField
    m21: ScalarField
    m22: ScalarField

    def __post_init__(self):
        _check_same_grid(self.m11, self.m12, self.m21, self.m22)

    @property
    def h(self) -> float:
        return self.m11.h

    @property
    def shape(self) -> tuple[int, int]:
        return self.m11.shape

    def row(self, k: int) -> VectorField:
        if k == 1:
            return VectorField(self.m11, self.m12)
        if k == 2:
            return VectorField(self.m21, self.m22)
        raise ValueError(f"row index must be 1 or 2, got {k}")

    @staticmethod
    def from_arrays(a11, a12, a21, a22, h: float = 1.0) -> "MatrixField":
        return MatrixField(
            ScalarField(a11, h), ScalarField(a12, h), ScalarField(a21, h), ScalarField(a22, h)
        )


def diff(v: ScalarField, axis: int, s: Scheme) -> ScalarField:
    """One-sided difference of v along axis 1 or 2, periodic wrap, divided by h."""
    if axis not in (1, 2):
        raise ValueError(f"axis must be 1 or 2, got {axis}")
    ax = axis - 1
    a = v.data
    if s is Scheme.FORWARD:
        d = np.roll(a, -1, axis=ax) - a
    else:
        d = a - np.roll(a, 1, axis=ax)
    return v.like(d / v.h)


def gradient(v: ScalarField, s: Scheme) -> VectorField:
    """(d1 v, d2 v) with scheme s."""
    return VectorField(diff(v, 1, s), diff(v, 2, s))


def jacobian(q: VectorField, s: Scheme) -> MatrixField:
    """Row k is the gradient of component k; m12 and m21 are unrelated in general."""
    g1 = gradient(q.c1, s)
    g2 = gradient(q.c2, s)
    return MatrixField(g1.c1, g1.c2, g2.c1, g2.c2)


def divergence(q: VectorField, s: Scheme) -> ScalarField:
    """d1 q1 + d2 q2 with scheme s."""
    return q.c1.like(diff(q.c1, 1, s).data + diff(q.c2, 2, s).data)


def matrix_divergence(m: MatrixField, s: Scheme) -> VectorField:
    """Row-wise divergence: component k is div of row k."""
    return VectorField(divergence(m.row(1), s), divergence(m.row(2), s))


def det(m: MatrixField) -> ScalarField:
    """Pointwise determinant m11*m22 - m12*m21."""
    return m.m11.like(m.m11.data * m.m22.data - m.m12.data * m.m21.data)

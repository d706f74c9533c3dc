"""Discretized L2 function space on an interval.

Curves are sampled on uniform grids and all integrals are trapezoidal
quadrature, so inner products, norms and distances are exact for the
discretized objects themselves. The cosine basis used by the simulation
design lives here as well.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, DomainError, GridMismatch

__all__ = [
    "Grid",
    "Curve",
    "FunctionalDataset",
    "inner_product",
    "l2_norm",
    "l2_distance",
    "fourier_basis",
    "concat",
    "stack_values",
]


@dataclass(frozen=True)
class Grid:
    """Uniform grid on [start, end] with ``num_points`` samples, endpoints included."""

    start: float
    end: float
    num_points: int

    def __post_init__(self):
        if self.num_points < 2:
            raise DomainError(f"grid needs at least 2 points, got {self.num_points}")
        if not self.end > self.start:
            raise DomainError(f"grid requires end > start, got [{self.start}, {self.end}]")

    @property
    def spacing(self) -> float:
        return (self.end - self.start) / (self.num_points - 1)

    @cached_property
    def points(self) -> np.ndarray:
        pts = np.linspace(self.start, self.end, self.num_points)
        pts.flags.writeable = False
        return pts

    @cached_property
    def quad_weights(self) -> np.ndarray:
        """Trapezoidal quadrature weights: spacing everywhere, halved at the endpoints."""
        w = np.full(self.num_points, self.spacing)
        w[0] *= 0.5
        w[-1] *= 0.5
        w.flags.writeable = False
        return w

    def is_unit_interval(self) -> bool:
        return self.start == 0.0 and self.end == 1.0


@dataclass(frozen=True)
class Curve:
    """A function sampled on a :class:`Grid`. Immutable; arithmetic requires equal grids."""

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.grid.num_points,):
            raise DimensionMismatch(
                f"expected {self.grid.num_points} values, got shape {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise DomainError("curve values must be finite")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def __add__(self, other: "Curve") -> "Curve":
        _check_grids(self, other)
        return Curve(self.grid, self.values + other.values)

    def __sub__(self, other: "Curve") -> "Curve":
        _check_grids(self, other)
        return Curve(self.grid, self.values - other.values)

    def __mul__(self, scalar: float) -> "Curve":
        return Curve(self.grid, self.values * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "Curve":
        return Curve(self.grid, -self.values)

    @classmethod
    def zero(cls, grid: Grid) -> "Curve":
        return cls(grid, np.zeros(grid.num_points))


@dataclass(frozen=True)
class FunctionalDataset:
    """Aligned triplets (X_i, T_i, Y_i): two curve samples and a scalar response per unit."""

    X: tuple
    T: tuple
    Y: np.ndarray

    def __post_init__(self):
        X = tuple(self.X)
        T = tuple(self.T)
        Y = np.asarray(self.Y, dtype=float)
        n = len(X)
        if n < 2:
            raise DimensionMismatch(f"need at least 2 observations, got {n}")
        if len(T) != n or Y.shape != (n,):
            raise DimensionMismatch(
                f"misaligned dataset: |X|={n}, |T|={len(T)}, |Y|={Y.shape}"
            )
        for seq, name in ((X, "X"), (T, "T")):
            g = seq[0].grid
            for c in seq[1:]:
                if c.grid != g:
                    raise GridMismatch(f"all {name} curves must share one grid")
        Y = Y.copy()
        Y.flags.writeable = False
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "Y", Y)

    @property
    def n(self) -> int:
        return len(self.X)

    @property
    def grid_X(self) -> Grid:
        return self.X[0].grid

    @property
    def grid_T(self) -> Grid:
        return self.T[0].grid


def _check_grids(f: Curve, g: Curve):
    if f.grid != g.grid:
        raise GridMismatch(f"grids differ: {f.grid} vs {g.grid}")


def stack_values(curves: Sequence[Curve]) -> np.ndarray:
    """Stack curves sharing one grid into an (n, G) array."""
    grid = curves[0].grid
    for c in curves[1:]:
        if c.grid != grid:
            raise GridMismatch("curves must share one grid to be stacked")
    return np.stack([c.values for c in curves])


def inner_product(f: Curve, g: Curve) -> float:
    """Trapezoidal approximation of the L2 inner product of two curves."""
    _check_grids(f, g)
    return float(np.dot(f.values * g.values, f.grid.quad_weights))


def l2_norm(f: Curve) -> float:
    """L2 norm induced by :func:`inner_product`."""
    return float(np.sqrt(max(inner_product(f, f), 0.0)))


def l2_distance(f: Curve, g: Curve) -> float:
    """L2 distance ||f - g||."""
    _check_grids(f, g)
    diff = f.values - g.values
    return float(np.sqrt(max(np.dot(diff * diff, f.grid.quad_weights), 0.0)))


def fourier_basis(j: int, grid: Grid) -> Curve:
    """Element j of the cosine basis on [0, 1].

    j = 1 is the constant function 1; for j >= 2 it is
    sqrt(2) * cos((j - 1) * pi * s). Orthonormal under the L2 inner
    product, up to quadrature error.
    """
    if j < 1:
        raise DomainError(f"basis index must be >= 1, got {j}")
    if not grid.is_unit_interval():
        raise DomainError("cosine basis is defined on [0, 1] only")
    if j == 1:
        return Curve(grid, np.ones(grid.num_points))
    return Curve(grid, np.sqrt(2.0) * np.cos((j - 1) * np.pi * grid.points))


def fourier_basis_matrix(n_terms: int, grid: Grid) -> np.ndarray:
    """Rows 1..n_terms of the cosine basis as an (n_terms, G) array."""
    return np.stack([fourier_basis(j + 1, grid).values for j in range(n_terms)])


def concat(f: Curve, g: Curve) -> Curve:
    """Join two curves on [0, 1] into one curve on [0, 2].

    The junction value at s = 1 is the mean of f(1) and g(0); the result
    has 2G - 1 points, so the squared norm on [0, 2] matches the sum of
    the two squared norms up to one quadrature cell at the junction.
    """
    if not (f.grid.is_unit_interval() and g.grid.is_unit_interval()):
        raise GridMismatch("concat requires both curves on [0, 1]")
    if f.grid != g.grid:
        raise GridMismatch("concat requires equal grids")
    G = f.grid.num_points
    values = np.empty(2 * G - 1)
    values[: G - 1] = f.values[: G - 1]
    values[G - 1] = 0.5 * (f.values[-1] + g.values[0])
    values[G:] = g.values[1:]
    return Curve(Grid(0.0, 2.0, 2 * G - 1), values)

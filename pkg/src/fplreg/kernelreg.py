"""Nadaraya-Watson machinery on curve-valued covariates.

Kernels with support [0, 1], pairwise L2 distances, the median-distance
bandwidth rule, row-stochastic weight matrices, and the residualization
of responses and covariate curves against the smoothing covariate.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateData,
    DimensionMismatch,
    DomainError,
    EmptyNeighborhood,
    GridMismatch,
)
from .funcspace import Curve, stack_values

__all__ = [
    "KernelSpec",
    "WeightMatrix",
    "eval_kernel",
    "pairwise_distances",
    "median_bandwidth",
    "nw_weights",
    "training_weight_matrix",
    "residualize_scalar",
    "residualize_curves",
    "nw_regress",
]


class KernelSpec(enum.Enum):
    """Kernels on [0, 1]; values outside the support map to 0."""

    QUADRATIC = "quadratic"
    UNIFORM = "uniform"
    TRIANGULAR = "triangular"


def eval_kernel(spec: KernelSpec, u) -> np.ndarray | float:
    """Evaluate the kernel at nonnegative scaled distances ``u``.

    Quadratic is 1 - u^2, uniform is 1, triangular is 1 - u, all on
    [0, 1] and 0 beyond. Accepts scalars or arrays.
    """
    u_arr = np.asarray(u, dtype=float)
    if np.any(u_arr < 0):
        raise DomainError("kernel argument must be nonnegative")
    inside = u_arr <= 1.0
    if spec is KernelSpec.QUADRATIC:
        vals = np.where(inside, 1.0 - u_arr**2, 0.0)
    elif spec is KernelSpec.UNIFORM:
        vals = np.where(inside, 1.0, 0.0)
    elif spec is KernelSpec.TRIANGULAR:
        vals = np.where(inside, 1.0 - u_arr, 0.0)
    else:  # pragma: no cover
        raise DomainError(f"unknown kernel {spec}")
    return float(vals) if np.isscalar(u) else vals


@dataclass(frozen=True)
class WeightMatrix:
    """Row-stochastic Nadaraya-Watson weights among training curves.

    The self-term j = i is included in both numerator and denominator,
    so K(0) > 0 guarantees every row sums to 1.
    """

    w: np.ndarray = field(repr=False)
    h: float
    kernel: KernelSpec
    distances: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float)
        w = w.copy()
        w.flags.writeable = False
        d = np.asarray(self.distances, dtype=float).copy()
        d.flags.writeable = False
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "distances", d)

    @property
    def n(self) -> int:
        return self.w.shape[0]


def _pairwise_distances_values(values: np.ndarray, quad_weights: np.ndarray) -> np.ndarray:
    """Pairwise L2 distances between the rows of an (n, G) sample matrix."""
    gram = (values * quad_weights) @ values.T
    sq = np.diag(gram)
    d2 = sq[:, None] + sq[None, :] - 2.0 * gram
    np.maximum(d2, 0.0, out=d2)
    d = np.sqrt(d2)
    np.fill_diagonal(d, 0.0)
    return d


def pairwise_distances(T: Sequence[Curve]) -> np.ndarray:
    """Symmetric matrix of L2 distances; zero diagonal."""
    if len(T) < 2:
        raise DimensionMismatch("need at least 2 curves")
    values = stack_values(T)
    return _pairwise_distances_values(values, T[0].grid.quad_weights)


def median_bandwidth(T: Sequence[Curve]) -> float:
    """Median of the n(n-1)/2 pairwise distances among the curves.

    Raises DegenerateData when every pairwise distance is zero, since a
    zero bandwidth is unusable.
    """
    d = pairwise_distances(T)
    upper = d[np.triu_indices_from(d, k=1)]
    h = float(np.median(upper))
    if h == 0.0 and np.all(upper == 0.0):
        raise DegenerateData("all pairwise distances are zero")
    if h == 0.0:
        # median can be 0 with duplicated curves; still unusable as a bandwidth
        raise DegenerateData("median pairwise distance is zero")
    return h


def nw_weights(
    T_train: Sequence[Curve], t: Curve, h: float, spec: KernelSpec
) -> np.ndarray:
    """Kernel weights of a query curve against the training curves.

    Nonnegative, summing to 1. Raises EmptyNeighborhood (carrying the
    nearest-neighbor distance) when no training curve is within h.
    """
    if h <= 0:
        raise DomainError(f"bandwidth must be positive, got {h}")
    values = stack_values(T_train)
    if t.grid != T_train[0].grid:
        raise GridMismatch("query curve is on a different grid than the training curves")
    diffs = values - t.values
    qw = t.grid.quad_weights
    d = np.sqrt(np.maximum(np.einsum("ij,ij,j->i", diffs, diffs, qw), 0.0))
    k = eval_kernel(spec, d / h)
    total = k.sum()
    if total <= 0.0:
        raise EmptyNeighborhood(d.min())
    return k / total


def training_weight_matrix(
    T: Sequence[Curve], h: float, spec: KernelSpec
) -> WeightMatrix:
    """All-pairs weight matrix w_ij = K(d_ij / h) / sum_k K(d_ik / h)."""
    if h <= 0:
        raise DomainError(f"bandwidth must be positive, got {h}")
    d = pairwise_distances(T)
    k = eval_kernel(spec, d / h)
    w = k / k.sum(axis=1, keepdims=True)
    return WeightMatrix(w=w, h=float(h), kernel=spec, distances=d)


def residualize_scalar(w: WeightMatrix, Y: np.ndarray) -> np.ndarray:
    """Y_i minus its kernel-smoothed fit: Y - W @ Y."""
    Y = np.asarray(Y, dtype=float)
    if Y.shape != (w.n,):
        raise DimensionMismatch(f"expected {w.n} responses, got shape {Y.shape}")
    return Y - w.w @ Y


def residualize_curves(w: WeightMatrix, X: Sequence[Curve]) -> list[Curve]:
    """Each X_i minus its kernel-smoothed curve, pointwise on the grid."""
    if len(X) != w.n:
        raise DimensionMismatch(f"expected {w.n} curves, got {len(X)}")
    values = stack_values(X)
    resid = values - w.w @ values
    grid = X[0].grid
    return [Curve(grid, row) for row in resid]


def nw_regress(
    T_train: Sequence[Curve],
    targets: np.ndarray,
    t: Curve,
    h: float,
    spec: KernelSpec,
) -> float:
    """Kernel-weighted average of scalar targets at a query curve."""
    targets = np.asarray(targets, dtype=float)
    if targets.shape != (len(T_train),):
        raise DimensionMismatch("one target per training curve required")
    w = nw_weights(T_train, t, h, spec)
    return float(w @ targets)

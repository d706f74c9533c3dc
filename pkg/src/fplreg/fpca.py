"""Empirical second-moment operator via the dual (Gram) eigendecomposition.

The eigensystem of the n-sample covariance-type operator
(1/n) sum_i X_i (x) X_i is read off the n x n matrix of pairwise inner
products, which is exact for the empirical operator and cheaper than a
grid-sized eigenproblem when n < G.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, GridMismatch, RankDeficient
from .funcspace import Curve, inner_product, stack_values

__all__ = ["EigenSystem", "CrossMoment", "cross_moment", "gram_eigensystem", "pc_scores"]

#: Relative floor below which an eigenvalue is treated as numerically zero.
EIGENVALUE_FLOOR = 1e-10


@dataclass(frozen=True)
class EigenSystem:
    """Descending eigenvalues with orthonormal eigenfunction curves."""

    eigenvalues: np.ndarray = field(repr=False)
    eigenfunctions: tuple = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.eigenvalues, dtype=float).copy()
        vals.flags.writeable = False
        object.__setattr__(self, "eigenvalues", vals)
        object.__setattr__(self, "eigenfunctions", tuple(self.eigenfunctions))

    @property
    def rank(self) -> int:
        return len(self.eigenvalues)


@dataclass(frozen=True)
class CrossMoment:
    """Sample cross second moment between residualized curves and responses."""

    delta: Curve


def cross_moment(X_tilde: Sequence[Curve], Y_tilde: np.ndarray) -> CrossMoment:
    """(1/n) sum_i Y_tilde_i * X_tilde_i, pointwise on the grid."""
    Y_tilde = np.asarray(Y_tilde, dtype=float)
    if Y_tilde.shape != (len(X_tilde),):
        raise DimensionMismatch(
            f"|X|={len(X_tilde)} but |Y|={Y_tilde.shape}"
        )
    values = stack_values(X_tilde)
    delta = (Y_tilde @ values) / len(X_tilde)
    return CrossMoment(delta=Curve(X_tilde[0].grid, delta))


def gram_eigensystem(X_tilde: Sequence[Curve], m_max: int | None = None) -> EigenSystem:
    """Top eigenpairs of the empirical second-moment operator of the curves.

    Forms M_ik = <X_i, X_k> / n, eigendecomposes it, and lifts each unit
    eigenvector v_j to the curve (1 / sqrt(n * lambda_j)) sum_i v_ji X_i.
    Eigenvalues below the relative floor are discarded. With ``m_max``
    given, RankDeficient is raised if fewer than ``m_max`` components
    survive; with ``m_max=None`` all surviving components are returned.

    Each eigenfunction is signed so that its entry of largest absolute
    value is positive; downstream coefficient estimates are invariant to
    this choice.
    """
    n = len(X_tilde)
    if m_max is not None and not 1 <= m_max <= n:
        raise DimensionMismatch(f"m_max must be in [1, {n}], got {m_max}")
    values = stack_values(X_tilde)
    grid = X_tilde[0].grid
    M = (values * grid.quad_weights) @ values.T / n
    M = 0.5 * (M + M.T)
    eigvals, eigvecs = np.linalg.eigh(M)
    order = np.argsort(eigvals)[::-1]
    eigvals = eigvals[order]
    eigvecs = eigvecs[:, order]

    lead = eigvals[0] if eigvals.size else 0.0
    floor = EIGENVALUE_FLOOR * max(lead, 0.0)
    keep = int(np.sum(eigvals > floor)) if lead > 0.0 else 0
    if m_max is not None and keep < m_max:
        raise RankDeficient(keep, requested=m_max)
    if m_max is not None:
        keep = m_max

    funcs = []
    for j in range(keep):
        coef = eigvecs[:, j] / np.sqrt(n * eigvals[j])
        phi = coef @ values
        if phi[np.argmax(np.abs(phi))] < 0:
            phi = -phi
        funcs.append(Curve(grid, phi))
    return EigenSystem(eigenvalues=np.clip(eigvals[:keep], 0.0, None), eigenfunctions=funcs)


def pc_scores(system: EigenSystem, f: Curve) -> np.ndarray:
    """Inner products of a curve with every stored eigenfunction."""
    if system.rank and f.grid != system.eigenfunctions[0].grid:
        raise GridMismatch("curve grid differs from the eigenfunction grid")
    return np.array([inner_product(f, phi) for phi in system.eigenfunctions])

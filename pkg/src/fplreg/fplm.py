"""Functional partial linear regression.

The response is modeled as an L2 inner product against one functional
covariate plus an unknown nonlinear functional of a second one. Both
covariates are residualized against the second covariate with
Nadaraya-Watson weights; the linear coefficient curve is then estimated
by principal component regression on the residualized pair, and the
nonlinear component by kernel smoothing of the partial residuals.

Also provides the two comparison estimators (fully linear, fully
nonparametric) and K-fold cross-validation over (m, bandwidth).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DegenerateData,
    EmptyNeighborhood,
    GridMismatch,
    InvalidConfig,
    RankDeficient,
)
from .fpca import EigenSystem, cross_moment, gram_eigensystem
from .funcspace import Curve, FunctionalDataset, inner_product, stack_values
from .kernelreg import (
    KernelSpec,
    WeightMatrix,
    median_bandwidth,
    nw_regress,
    nw_weights,
    residualize_curves,
    residualize_scalar,
    training_weight_matrix,
)

__all__ = [
    "FitConfig",
    "FittedModel",
    "fit_fplm",
    "predict_g",
    "predict",
    "fit_flm",
    "fit_npfr",
    "cross_validate",
]


@dataclass(frozen=True)
class FitConfig:
    """Fitting parameters: truncation level, bandwidth, kernel.

    Exactly one of ``h`` (absolute bandwidth) and ``bandwidth_multiplier``
    (applied to the median pairwise distance of the smoothing covariate)
    must be set.
    """

    m: int
    h: float | None = None
    bandwidth_multiplier: float | None = None
    kernel: KernelSpec = KernelSpec.QUADRATIC

    def __post_init__(self):
        if self.m < 1:
            raise InvalidConfig(f"truncation level must be >= 1, got {self.m}")
        if (self.h is None) == (self.bandwidth_multiplier is None):
            raise InvalidConfig("set exactly one of h and bandwidth_multiplier")
        if self.h is not None and self.h <= 0:
            raise InvalidConfig(f"bandwidth must be positive, got {self.h}")
        if self.bandwidth_multiplier is not None and self.bandwidth_multiplier <= 0:
            raise InvalidConfig(
                f"bandwidth multiplier must be positive, got {self.bandwidth_multiplier}"
            )


@dataclass(frozen=True)
class FittedModel:
    """A fitted functional partial linear model.

    ``b_hat`` is the estimated coefficient curve; ``partial_residuals``
    are Y_j - <b_hat, X_j>, which the kernel smoother turns into the
    nonlinear component at prediction time.
    """

    b_hat: Curve
    m: int
    h: float
    kernel: KernelSpec
    T_train: tuple
    partial_residuals: np.ndarray = field(repr=False)
    coefficients: np.ndarray = field(repr=False)
    eigenvalues_used: np.ndarray = field(repr=False)
    train_weights: WeightMatrix | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        for name in ("partial_residuals", "coefficients", "eigenvalues_used"):
            arr = np.asarray(getattr(self, name), dtype=float).copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "T_train", tuple(self.T_train))

    @property
    def n(self) -> int:
        return len(self.T_train)

    def in_sample_g(self) -> np.ndarray:
        """Smoothed nonlinear component at every training point."""
        w = self.train_weights
        if w is None:
            w = training_weight_matrix(self.T_train, self.h, self.kernel)
            object.__setattr__(self, "train_weights", w)
        return w.w @ self.partial_residuals


def _resolve_bandwidth(T: Sequence[Curve], cfg: FitConfig) -> float:
    if cfg.h is not None:
        return cfg.h
    return cfg.bandwidth_multiplier * median_bandwidth(T)


def _fit_cells(
    data: FunctionalDataset, h: float, kernel: KernelSpec, m_list: Sequence[int]
) -> dict[int, "FittedModel | RankDeficient"]:
    """Fit one model per truncation level, sharing one bandwidth.

    The weight matrix, residualization and eigendecomposition are computed
    once; a truncation level beyond the achievable rank maps to the
    RankDeficient error instead of a model (unless the residualized
    response is identically zero, in which case the coefficient curve is
    zero regardless of rank).
    """
    W = training_weight_matrix(data.T, h, kernel)
    Y_tilde = residualize_scalar(W, data.Y)
    X_tilde = residualize_curves(W, data.X)
    eig = gram_eigensystem(X_tilde)
    delta = cross_moment(X_tilde, Y_tilde).delta

    coef_all = np.array(
        [inner_product(delta, phi) / lam
         for phi, lam in zip(eig.eigenfunctions, eig.eigenvalues)]
    )
    grid_X = data.grid_X
    X_values = stack_values(data.X)
    qw = grid_X.quad_weights
    y_is_flat = bool(np.all(np.abs(Y_tilde) <= 1e-12))

    out: dict[int, FittedModel | RankDeficient] = {}
    for m in m_list:
        use = min(m, eig.rank)
        if use < m and not y_is_flat:
            out[m] = RankDeficient(eig.rank, requested=m)
            continue
        if use:
            phi_values = np.stack([c.values for c in eig.eigenfunctions[:use]])
            b_values = coef_all[:use] @ phi_values
        else:
            b_values = np.zeros(grid_X.num_points)
        b_hat = Curve(grid_X, b_values)
        residuals = data.Y - (X_values * qw) @ b_values
        out[m] = FittedModel(
            b_hat=b_hat,
            m=m,
            h=h,
            kernel=kernel,
            T_train=data.T,
            partial_residuals=residuals,
            coefficients=coef_all[:use],
            eigenvalues_used=eig.eigenvalues[:use],
            train_weights=W,
        )
    return out


def fit_fplm(data: FunctionalDataset, cfg: FitConfig) -> FittedModel:
    """Fit the partial linear model on a dataset.

    Raises RankDeficient when the requested truncation level exceeds the
    achievable rank of the residualized covariates, and DegenerateData
    when the smoothing covariates are all identical (no bandwidth).
    """
    h = _resolve_bandwidth(data.T, cfg)
    result = _fit_cells(data, h, cfg.kernel, [cfg.m])[cfg.m]
    if isinstance(result, RankDeficient):
        raise result
    return result


def predict_g(model: FittedModel, t: Curve) -> float:
    """Estimated nonlinear component at a query curve."""
    return nw_regress(model.T_train, model.partial_residuals, t, model.h, model.kernel)


def predict(model: FittedModel, x: Curve, t: Curve) -> float:
    """Full prediction: linear part plus smoothed nonlinear part."""
    if x.grid != model.b_hat.grid:
        raise GridMismatch("covariate curve grid differs from the training grid")
    return inner_product(model.b_hat, x) + predict_g(model, t)


def fit_flm(Z: Sequence[Curve], Y: np.ndarray, m: int) -> tuple[Curve, float]:
    """Fully linear comparison fit: centered principal component regression.

    Returns the coefficient curve and an intercept; a prediction at z is
    ``intercept + <b, z>``.
    """
    Y = np.asarray(Y, dtype=float)
    n = len(Z)
    grid = Z[0].grid
    values = stack_values(Z)
    mean_curve = values.mean(axis=0)
    Zc = [Curve(grid, row - mean_curve) for row in values]
    Yc = Y - Y.mean()

    eig = gram_eigensystem(Zc, m)
    delta = cross_moment(Zc, Yc).delta
    coef = np.array(
        [inner_product(delta, phi) / lam
         for phi, lam in zip(eig.eigenfunctions, eig.eigenvalues)]
    )
    b_values = coef @ np.stack([c.values for c in eig.eigenfunctions])
    b = Curve(grid, b_values)
    intercept = float(Y.mean() - np.dot(b_values * grid.quad_weights, mean_curve))
    return b, intercept


def fit_npfr(
    Z: Sequence[Curve], Y: np.ndarray, h: float, kernel: KernelSpec
) -> Callable[[Curve], float]:
    """Fully nonparametric comparison fit: a kernel-regression predictor."""
    Y = np.asarray(Y, dtype=float).copy()
    Z = tuple(Z)

    def predictor(z: Curve) -> float:
        return nw_regress(Z, Y, z, h, kernel)

    return predictor


def _predict_heldout(model: FittedModel, x: Curve, t: Curve) -> float:
    """Held-out prediction with a nearest-neighbor fallback.

    When no training curve is within bandwidth of t, the nonlinear part
    falls back to the partial residual of the nearest training curve.
    """
    linear = inner_product(model.b_hat, x)
    try:
        g = predict_g(model, t)
    except EmptyNeighborhood:
        dists = np.array(
            [np.sqrt(max(np.dot((c.values - t.values) ** 2, t.grid.quad_weights), 0.0))
             for c in model.T_train]
        )
        g = float(model.partial_residuals[int(np.argmin(dists))])
    return linear + g


def cross_validate(
    data: FunctionalDataset,
    m_grid: Sequence[int],
    h_multipliers: Sequence[float],
    folds: int,
    seed: int = 0,
) -> tuple[int, float, list[tuple[int, float, float]]]:
    """K-fold search over truncation level and bandwidth multiplier.

    Fold assignment is ``i mod folds`` after a seeded shuffle. Each
    candidate's score is the average held-out squared prediction error;
    held-out points outside every kernel neighborhood use the
    nearest-neighbor fallback. Candidates that fail on some fold (e.g.
    rank deficiency) score infinity. Ties break toward smaller m, then
    smaller multiplier.

    Returns (best_m, best_multiplier, table) with one (m, multiplier,
    cv_error) row per candidate.
    """
    m_grid = list(m_grid)
    h_multipliers = list(h_multipliers)
    if folds < 2:
        raise InvalidConfig(f"need at least 2 folds, got {folds}")
    if data.n < folds:
        raise InvalidConfig(f"need n >= folds, got n={data.n}, folds={folds}")
    if not m_grid or not h_multipliers:
        raise InvalidConfig("candidate grids must be nonempty")
    if any(m < 1 for m in m_grid) or any(mult <= 0 for mult in h_multipliers):
        raise InvalidConfig("invalid candidate values")

    rng = np.random.default_rng(seed)
    perm = rng.permutation(data.n)
    fold_of = np.empty(data.n, dtype=int)
    fold_of[perm] = np.arange(data.n) % folds

    sq_err = {(m, mult): 0.0 for m in m_grid for mult in h_multipliers}
    failed = set()
    for fold in range(folds):
        test_idx = np.flatnonzero(fold_of == fold)
        train_idx = np.flatnonzero(fold_of != fold)
        train = FunctionalDataset(
            X=[data.X[i] for i in train_idx],
            T=[data.T[i] for i in train_idx],
            Y=data.Y[train_idx],
        )
        try:
            h_base = median_bandwidth(train.T)
        except DegenerateData:
            failed.update(sq_err)
            continue
        for mult in h_multipliers:
            cells = _fit_cells(train, mult * h_base, KernelSpec.QUADRATIC, m_grid)
            for m in m_grid:
                model = cells[m]
                if isinstance(model, RankDeficient):
                    failed.add((m, mult))
                    continue
                for i in test_idx:
                    pred = _predict_heldout(model, data.X[i], data.T[i])
                    sq_err[(m, mult)] += (pred - data.Y[i]) ** 2

    table = []
    for m in m_grid:
        for mult in h_multipliers:
            err = np.inf if (m, mult) in failed else sq_err[(m, mult)] / data.n
            table.append((m, float(mult), float(err)))
    if all(not np.isfinite(row[2]) for row in table):
        raise InvalidConfig("every candidate failed during cross-validation")
    best_m, best_mult, _ = min(table, key=lambda row: (row[2], row[0], row[1]))
    return best_m, best_mult, table

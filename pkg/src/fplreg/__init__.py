"""Functional partial linear regression toolkit.

A scalar response is regressed on two curve-valued covariates: one
enters through an L2 inner product with an unknown coefficient curve,
the other through an unknown nonlinear functional. Estimation combines
Nadaraya-Watson residualization with principal component regression.
"""

from .errors import (
    DegenerateData,
    DimensionMismatch,
    DomainError,
    EmptyNeighborhood,
    FplregError,
    GridMismatch,
    InvalidConfig,
    RankDeficient,
)
from .fpca import CrossMoment, EigenSystem, cross_moment, gram_eigensystem, pc_scores
from .fplm import (
    FitConfig,
    FittedModel,
    cross_validate,
    fit_flm,
    fit_fplm,
    fit_npfr,
    predict,
    predict_g,
)
from .funcspace import (
    Curve,
    FunctionalDataset,
    Grid,
    concat,
    fourier_basis,
    inner_product,
    l2_distance,
    l2_norm,
)
from .kernelreg import (
    KernelSpec,
    WeightMatrix,
    eval_kernel,
    median_bandwidth,
    nw_regress,
    nw_weights,
    pairwise_distances,
    residualize_curves,
    residualize_scalar,
    training_weight_matrix,
)
from .simstudy import (
    BenchmarkTable,
    ErrorReport,
    SimConfig,
    TruthBundle,
    child_rng,
    error_report,
    export_bhat,
    generate,
    run_benchmark,
    sample_T,
    sample_X,
    true_b,
    true_g,
)

__version__ = "0.1.0"

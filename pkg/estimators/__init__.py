"""estimators package — LS, LMMSE, trained-linear and MLP channel estimators."""

from estimators.base import (
    DimensionMismatchError,
    Estimator,
    EstimatorError,
    IllConditionedError,
    LsIdentity,
    NonFiniteError,
    RankDeficientError,
    apply_estimator,
)
from estimators.linear import (
    BlockLinearEstimator,
    LinearEstimator,
    LinearWeights,
    PerRealizationLmmse,
    apply_linear,
    linear_mse_exact,
    lmmse_mse_per_subcarrier,
    lmmse_mse_theoretical,
    lmmse_row,
    lmmse_weights,
    robust_lmmse_weights,
    train_linear,
)
from estimators.mlp import MlpEstimator, MlpHyper, MlpParams, identity_mlp, train_mlp

__all__ = [
    "BlockLinearEstimator",
    "DimensionMismatchError",
    "Estimator",
    "EstimatorError",
    "IllConditionedError",
    "LinearEstimator",
    "LinearWeights",
    "LsIdentity",
    "MlpEstimator",
    "MlpHyper",
    "MlpParams",
    "NonFiniteError",
    "PerRealizationLmmse",
    "RankDeficientError",
    "apply_estimator",
    "apply_linear",
    "identity_mlp",
    "linear_mse_exact",
    "lmmse_mse_per_subcarrier",
    "lmmse_mse_theoretical",
    "lmmse_row",
    "lmmse_weights",
    "robust_lmmse_weights",
    "train_linear",
    "train_mlp",
]

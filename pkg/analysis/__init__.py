"""analysis package — chi-square functions and the sample-size bound."""

from analysis.bound import (
    AlphaCurve,
    BracketFailureError,
    LossModel,
    alpha_for_epsilon,
    build_alpha_curve,
    epsilon_monte_carlo,
    epsilon_quadrature,
    linear_excess_ratio,
    mse_upper_bound,
    sufficient_sample_size,
)
from analysis.chi2 import NonConvergedError, chi2_cdf, chi2_pdf, wilson_hilferty_cdf

__all__ = [
    "AlphaCurve",
    "BracketFailureError",
    "LossModel",
    "NonConvergedError",
    "alpha_for_epsilon",
    "build_alpha_curve",
    "chi2_cdf",
    "chi2_pdf",
    "epsilon_monte_carlo",
    "epsilon_quadrature",
    "linear_excess_ratio",
    "mse_upper_bound",
    "sufficient_sample_size",
    "wilson_hilferty_cdf",
]

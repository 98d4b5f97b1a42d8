"""experiments/loss_densities.py — Densities of the two modelled training losses."""

from __future__ import annotations

import math
from typing import Any

import numpy as np
from scipy.integrate import trapezoid

from analysis.bound import LossModel
from experiments.artifacts import PlotSpec
from experiments.base import BaseRunner, RunResult, check


def run_loss_densities(
    kappa: int = 1200,
    alpha: float = 0.1,
    points: int = 401,
    mse_opt: float = 1.0,
) -> RunResult:
    """Tabulate ``p1``, ``F2`` and their product, whose integral is epsilon."""
    model = LossModel.from_alpha(kappa, alpha, mse_opt)
    spread = 8.0 * math.sqrt(2.0 / kappa)
    lo = max(0.0, mse_opt * (1.0 - spread))
    hi = model.mse_learned * (1.0 + spread)
    x = np.linspace(lo, hi, points)
    pdf = model.pdf_opt(x)
    cdf = model.cdf_learned(x)
    product = pdf * cdf

    eps = model.epsilon()
    integral = float(trapezoid(product, x))
    rows = [[float(a), float(b), float(c), float(d)] for a, b, c, d in zip(x, pdf, cdf, product)]
    return RunResult(
        success=True,
        name="loss-densities",
        header=["x", "pdf_opt", "cdf_learned", "integrand"],
        rows=rows,
        checks=[check("tabulated integrand integrates to epsilon", abs(integral - eps) < 1e-3,
                      f"{integral:.5f} vs {eps:.5f}")],
        metadata={"kappa": kappa, "alpha": alpha, "mse_opt": mse_opt, "epsilon": eps},
        plot=PlotSpec(x="x", y=["pdf_opt", "integrand"], xlabel="training loss",
                      title=f"kappa={kappa}, alpha={alpha:g}"),
    )


class LossDensitiesRunner(BaseRunner):
    name = "loss-densities"
    description = "Chi-square densities of the optimal and learned training losses"
    options = ("kappa", "alpha", "points")

    def run(self, **kwargs: Any) -> RunResult:
        return run_loss_densities(**kwargs)

"""experiments/lemma_check.py — Distribution of the sampled training loss.

For a fixed LMMSE estimator and one output subcarrier, the average squared
error over M independent symbols, scaled as ``2 M xi / L``, should follow
chi-square with 2M degrees of freedom.  The check draws many such averages
and runs a Kolmogorov-Smirnov test against that law.
"""

from __future__ import annotations

import logging
from typing import Any

import numpy as np
from scipy import stats

from channel.ofdm import ChannelScenario, OfdmConfig, PdpKind, PdpSpec, freq_correlation, observe_ls
from estimators.linear import lmmse_mse_per_subcarrier, lmmse_row
from experiments.artifacts import PlotSpec
from experiments.base import BaseRunner, RunResult, check
from experiments.rng import Stream, make_rng

logger = logging.getLogger(__name__)

QUANTILES = tuple(round(q, 2) for q in np.arange(0.05, 1.0, 0.05))


def sampled_losses(
    cfg: OfdmConfig,
    scenario: ChannelScenario,
    subcarrier: int,
    m: int,
    repetitions: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """``repetitions`` averages of ``|error|^2`` over ``m`` symbols each."""
    row = lmmse_row(freq_correlation(scenario.pdp, cfg), scenario.sigma2, subcarrier)
    cfr, _ = scenario.sample(cfg, repetitions * m, rng)
    h_ls = observe_ls(cfr, scenario.sigma2, rng)
    err = h_ls @ row - cfr[:, subcarrier]
    return np.mean((np.abs(err) ** 2).reshape(repetitions, m), axis=1)


def run_lemma_check(
    n: int = 16,
    k: int = 4,
    tau_max: int = 2,
    snr: float = 0.0,
    m: int = 5,
    trials: int = 10_000,
    subcarrier: int = 0,
    significance: float = 0.01,
    seed: int = 1,
) -> RunResult:
    cfg = OfdmConfig(n, k)
    scenario = ChannelScenario.stationary(PdpSpec(PdpKind.EXPONENTIAL, tau_max), snr)
    if not 0 <= subcarrier < k:
        raise ValueError(f"subcarrier must be in [0, {k}), got {subcarrier}")
    loss_opt = lmmse_mse_per_subcarrier(freq_correlation(scenario.pdp, cfg), scenario.sigma2)[subcarrier]

    xi = sampled_losses(cfg, scenario, subcarrier, m, trials, make_rng(seed, Stream.ORACLE))
    scaled = 2.0 * m * xi / loss_opt
    dof = 2 * m
    ks = stats.kstest(scaled, "chi2", args=(dof,))

    empirical = np.quantile(scaled, QUANTILES)
    model = stats.chi2.ppf(QUANTILES, dof)
    rows = [[q, float(e), float(t)] for q, e, t in zip(QUANTILES, empirical, model)]

    mean_se = scaled.std(ddof=1) / np.sqrt(trials)
    logger.info("loss distribution check: KS=%.4f p=%.4f", ks.statistic, ks.pvalue)
    return RunResult(
        success=True,
        name="lemma-check",
        header=["quantile", "empirical", "chi2_model"],
        rows=rows,
        checks=[
            check(f"KS test against chi2({dof}) passes at {significance:g}",
                  ks.pvalue >= significance, f"D={ks.statistic:.4f}, p={ks.pvalue:.4f}"),
            check(f"mean of scaled loss = {dof}", abs(scaled.mean() - dof) <= 4.0 * mean_se,
                  f"{scaled.mean():.4f}"),
        ],
        metadata={
            "n": n, "k": k, "tau_max": tau_max, "snr_db": snr, "m": m, "trials": trials,
            "subcarrier": subcarrier, "loss_opt": float(loss_opt), "ks_statistic": float(ks.statistic),
            "p_value": float(ks.pvalue), "seed": seed,
        },
        plot=PlotSpec(x="chi2_model", y=["empirical"], xlabel=f"chi2({dof}) quantile",
                      ylabel="empirical quantile", title="Scaled training-loss quantiles"),
    )


class LemmaCheckRunner(BaseRunner):
    name = "lemma-check"
    description = "Kolmogorov-Smirnov check of the chi-square training-loss model"
    options = ("n", "k", "tau_max", "snr", "m", "trials", "subcarrier", "seed")

    def run(self, **kwargs: Any) -> RunResult:
        return run_lemma_check(**kwargs)

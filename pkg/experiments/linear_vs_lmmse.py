"""experiments/linear_vs_lmmse.py — Trained linear module against the LMMSE optimum.

For each usable-carrier count K and SNR, a linear module is fitted to M
training pairs and compared with the analytic LMMSE estimator on shared
evaluation draws.  The same comparison drives the alpha-vs-K and alpha-vs-M
sweeps.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence

from channel.ofdm import ChannelScenario, OfdmConfig, PdpKind, PdpSpec, freq_correlation
from estimators.linear import (
    LinearEstimator,
    linear_mse_exact,
    lmmse_mse_theoretical,
    lmmse_weights,
    train_linear,
)
from analysis.bound import linear_excess_ratio, mse_upper_bound
from experiments.artifacts import PlotSpec
from experiments.base import BaseRunner, RunResult, check
from experiments.dataset import generate_training_set
from experiments.evaluation import evaluate_many, scaled_mse_difference
from experiments.rng import Stream, make_rng

logger = logging.getLogger(__name__)

DEFAULT_SNR = (-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0)
LINEAR_TRIALS = 200_000
#: Confidence parameter of the accepted-MSE bound column.
BOUND_EPSILON = 0.05


@dataclass
class LinearComparison:
    """Outcome of one trained-linear vs LMMSE point."""

    mse_trained: float
    se_trained: float
    mse_lmmse: float
    se_lmmse: float
    mse_opt: float
    mse_exact: float
    alpha_hat: float
    alpha_se: float
    alpha_exact: float
    alpha_expected: float
    estimator: Optional[LinearEstimator] = None


def compare_trained_linear(
    cfg: OfdmConfig,
    pdp: PdpSpec,
    snr_db: float,
    train_size: int,
    trials: int,
    seed: int,
    key: Sequence[int],
    workers: int = 1,
    with_lmmse: bool = True,
) -> LinearComparison:
    """Train on ``train_size`` pairs and evaluate against the analytic optimum.

    Training and evaluation draw from the TRAIN and EVAL streams under the
    same ``key``.
    """
    scenario = ChannelScenario.stationary(pdp, snr_db)
    r_hh = freq_correlation(pdp, cfg)
    mse_opt = lmmse_mse_theoretical(r_hh, scenario.sigma2)

    training = generate_training_set(
        scenario, cfg, train_size, make_rng(seed, Stream.TRAIN, *key), seed=seed
    )
    trained = train_linear(training)
    trained_estimator = LinearEstimator(trained, name="trained-linear")
    estimators: Dict[str, Any] = {"trained": trained_estimator}
    if with_lmmse:
        estimators["lmmse"] = LinearEstimator(lmmse_weights(r_hh, scenario.sigma2), name="lmmse")

    reports = evaluate_many(
        estimators, scenario, cfg, trials, make_rng(seed, Stream.EVAL, *key), workers, mse_opt
    )
    rep_t = reports["trained"]
    rep_l = reports.get("lmmse")
    mse_exact = linear_mse_exact(trained, r_hh, scenario.sigma2)
    result = LinearComparison(
        mse_trained=rep_t.mse,
        se_trained=rep_t.mse_std_error,
        mse_lmmse=rep_l.mse if rep_l else math.nan,
        se_lmmse=rep_l.mse_std_error if rep_l else math.nan,
        mse_opt=mse_opt,
        mse_exact=mse_exact,
        alpha_hat=scaled_mse_difference(rep_t.mse, mse_opt),
        alpha_se=rep_t.mse_std_error / mse_opt,
        alpha_exact=scaled_mse_difference(mse_exact, mse_opt),
        alpha_expected=linear_excess_ratio(cfg.usable_count, train_size),
        estimator=trained_estimator,
    )
    logger.info(
        "K=%d snr=%g dB M=%d: mse=%.5g opt=%.5g alpha_hat=%.4f",
        cfg.usable_count, snr_db, train_size, result.mse_trained, mse_opt, result.alpha_hat,
    )
    return result


def run_linear_vs_lmmse(
    n: int = 16,
    k: Sequence[int] = (4, 8, 12),
    m: int = 600,
    tau_max: int = 2,
    snr: Sequence[float] = DEFAULT_SNR,
    trials: int = LINEAR_TRIALS,
    seed: int = 1,
    workers: int = 1,
) -> RunResult:
    """MSE versus SNR of the trained linear module and the LMMSE estimator."""
    pdp = PdpSpec(PdpKind.EXPONENTIAL, tau_max)
    header = [
        "k", "snr_db", "mse_trained", "se_trained", "mse_lmmse", "se_lmmse",
        "mse_lmmse_theory", "mse_bound", "alpha_hat", "alpha_exact", "alpha_expected",
    ]
    rows = []
    checks = []
    trained: Dict[str, LinearEstimator] = {}
    for ki, k_val in enumerate(k):
        cfg = OfdmConfig(n, k_val)
        opt_by_snr = []
        for si, snr_db in enumerate(snr):
            res = compare_trained_linear(cfg, pdp, snr_db, m, trials, seed, (ki, si), workers)
            rows.append([
                k_val, snr_db, res.mse_trained, res.se_trained, res.mse_lmmse, res.se_lmmse,
                res.mse_opt, mse_upper_bound(res.mse_opt, 2 * m, BOUND_EPSILON),
                res.alpha_hat, res.alpha_exact, res.alpha_expected,
            ])
            trained[f"trained-k{k_val}-{snr_db:g}db"] = res.estimator
            opt_by_snr.append((snr_db, res.mse_opt))
            slack = 3.0 * math.hypot(res.se_trained, res.se_lmmse)
            checks.append(check(
                f"trained >= lmmse (K={k_val}, {snr_db:g} dB)",
                res.mse_trained >= res.mse_lmmse - slack,
                f"{res.mse_trained:.5g} vs {res.mse_lmmse:.5g}",
            ))
            checks.append(check(
                f"alpha_hat < 0.15 (K={k_val}, {snr_db:g} dB)",
                res.alpha_hat < 0.15,
                f"{res.alpha_hat:.4f}",
            ))
            if snr_db == 0:
                checks.append(check(
                    f"alpha_hat < 0.1 at 0 dB (K={k_val})", res.alpha_hat < 0.1, f"{res.alpha_hat:.4f}"
                ))
        ordered = [mse for _, mse in sorted(opt_by_snr)]
        checks.append(check(
            f"LMMSE MSE decreasing in SNR (K={k_val})",
            all(b < a for a, b in zip(ordered, ordered[1:])),
        ))

    return RunResult(
        success=True,
        name="linear-vs-lmmse",
        header=header,
        rows=rows,
        checks=checks,
        metadata={
            "n": n, "k": list(k), "m": m, "tau_max": tau_max, "pdp": pdp.kind.value,
            "snr_db": list(snr), "trials": trials, "seed": seed, "bound_epsilon": BOUND_EPSILON,
        },
        estimators=trained,
        plot=PlotSpec(
            x="snr_db", y=["mse_trained", "mse_lmmse"], group_by="k",
            xlabel="SNR (dB)", ylabel="MSE", log_y=True,
            title=f"Trained linear vs LMMSE (N={n}, M={m})",
        ),
    )


class LinearVsLmmseRunner(BaseRunner):
    name = "linear-vs-lmmse"
    description = "MSE vs SNR of the trained linear module and the LMMSE estimator"
    options = ("n", "k", "m", "tau_max", "snr", "trials", "seed", "workers")

    def run(self, **kwargs: Any) -> RunResult:
        return run_linear_vs_lmmse(**kwargs)

"""experiments/dnn_quasi.py — Neural estimator on quasi-stationary channels.

Every realization draws its own maximum delay uniformly from ``tau_set``.
The MLP trained on a large set and on a small one is compared with LS, the
robust LMMSE (uniform PDP at the largest delay), the per-realization LMMSE
and a trained linear module.  No analytic optimum exists here, so only raw
MSE is reported.
"""

from __future__ import annotations

import logging
from dataclasses import replace
from typing import Any, Dict, Optional, Sequence

from channel.ofdm import ChannelScenario, OfdmConfig, PdpKind
from estimators.base import LsIdentity
from estimators.linear import LinearEstimator, PerRealizationLmmse, robust_lmmse_weights, train_linear
from estimators.mlp import MlpHyper, train_mlp
from experiments.artifacts import PlotSpec
from experiments.base import BaseRunner, RunResult, check
from experiments.dataset import generate_training_set
from experiments.evaluation import EvalReport, evaluate_many
from experiments.linear_vs_lmmse import LINEAR_TRIALS
from experiments.rng import Stream, make_rng

logger = logging.getLogger(__name__)

MLP_TRIALS = 20_000

#: MLP settings for the sweep: capped epochs, loss monitored on 5000 samples.
DNN_QUASI_HYPER = MlpHyper(batch_size=256, max_epochs=150, patience=20, loss_subsample=5_000)


def run_dnn_quasi(
    n: int = 64,
    k: int = 60,
    tau_set: Sequence[int] = tuple(range(1, 17)),
    snr: Sequence[float] = (0.0, 10.0, 20.0),
    m: int = 600,
    m_large: int = 50_000,
    trials: int = LINEAR_TRIALS,
    trials_mlp: int = MLP_TRIALS,
    hyper: Optional[MlpHyper] = None,
    max_epochs: Optional[int] = None,
    batch_size: Optional[int] = None,
    seed: int = 1,
    workers: int = 1,
) -> RunResult:
    """MSE versus SNR of LS, robust/per-realization LMMSE, linear and MLP estimators.

    ``max_epochs`` and ``batch_size`` override the matching fields of *hyper*
    (default :data:`DNN_QUASI_HYPER`).
    """
    cfg = OfdmConfig(n, k)
    caps = {"max_epochs": max_epochs, "batch_size": batch_size}
    hyper = replace(hyper or DNN_QUASI_HYPER, **{key: v for key, v in caps.items() if v is not None})
    base = ChannelScenario.quasi_stationary(tuple(tau_set), 0.0, PdpKind.EXPONENTIAL)
    base.check_against(cfg)
    tau_upper = base.tau_upper
    header = ["snr_db", "estimator", "train_size", "mse", "mse_std_error", "n_trials"]
    rows = []
    by_snr: Dict[float, Dict[str, EvalReport]] = {}
    training_meta = []
    saved: Dict[str, Any] = {}

    for si, snr_db in enumerate(snr):
        scenario = base.with_snr(snr_db)
        large = generate_training_set(scenario, cfg, m_large, make_rng(seed, Stream.TRAIN, si, 0), seed)
        small = generate_training_set(scenario, cfg, m, make_rng(seed, Stream.TRAIN, si, 1), seed)

        mlp_large = train_mlp(large, hyper, make_rng(seed, Stream.INIT, si, 0), seed=seed)
        mlp_small = train_mlp(small, hyper, make_rng(seed, Stream.INIT, si, 1), seed=seed)
        for label, net, size in (("mlp-large", mlp_large, m_large), ("mlp-small", mlp_small, m)):
            training_meta.append({
                "snr_db": snr_db, "estimator": label, "train_size": size,
                "initial_loss": net.initial_loss, "final_loss": net.final_loss, "epochs": net.epochs,
            })

        linear = {
            "ls": LsIdentity(k),
            "robust-lmmse": LinearEstimator(robust_lmmse_weights(tau_upper, cfg, scenario.sigma2), "robust-lmmse"),
            "lmmse-per-realization": PerRealizationLmmse(cfg, scenario.kind, scenario.sigma2),
            "linear-large": LinearEstimator(train_linear(large), "trained-linear"),
        }
        reports = evaluate_many(linear, scenario, cfg, trials, make_rng(seed, Stream.EVAL, si, 0), workers)
        reports.update(evaluate_many(
            {"mlp-large": mlp_large, "mlp-small": mlp_small},
            scenario, cfg, trials_mlp, make_rng(seed, Stream.EVAL, si, 1), workers,
        ))
        by_snr[snr_db] = reports
        saved[f"mlp-large-{snr_db:g}db"] = mlp_large
        saved[f"mlp-small-{snr_db:g}db"] = mlp_small
        saved[f"linear-large-{snr_db:g}db"] = linear["linear-large"]

        sizes = {"linear-large": m_large, "mlp-large": m_large, "mlp-small": m}
        for label, rep in reports.items():
            rows.append([snr_db, label, sizes.get(label), rep.mse, rep.mse_std_error, rep.n_trials])
        logger.info(
            "quasi-stationary %g dB: robust=%.4g mlp-large=%.4g mlp-small=%.4g",
            snr_db, reports["robust-lmmse"].mse, reports["mlp-large"].mse, reports["mlp-small"].mse,
        )

    checks = []
    for snr_db, reports in by_snr.items():
        ls = reports["ls"]
        sigma2 = 10.0 ** (-snr_db / 10.0)
        checks.append(check(
            f"LS MSE = sigma2 at {snr_db:g} dB",
            abs(ls.mse - sigma2) <= 4.0 * ls.mse_std_error,
            f"{ls.mse:.5g} vs {sigma2:.5g}",
        ))
        robust, genie = reports["robust-lmmse"], reports["lmmse-per-realization"]
        checks.append(check(
            f"robust LMMSE >= per-realization LMMSE at {snr_db:g} dB",
            robust.mse >= genie.mse - 3.0 * (robust.mse_std_error + genie.mse_std_error),
        ))
    if 10.0 in by_snr:
        at10 = by_snr[10.0]
        checks.append(check(
            "MLP (large set) beats robust LMMSE at 10 dB",
            at10["mlp-large"].mse < at10["robust-lmmse"].mse,
            f"{at10['mlp-large'].mse:.4g} vs {at10['robust-lmmse'].mse:.4g}",
        ))
        checks.append(check(
            "MLP (small set) at least 2x worse than large set at 10 dB",
            at10["mlp-small"].mse >= 2.0 * at10["mlp-large"].mse,
            f"{at10['mlp-small'].mse:.4g} vs {at10['mlp-large'].mse:.4g}",
        ))

    return RunResult(
        success=True,
        name="dnn-quasi",
        header=header,
        rows=rows,
        checks=checks,
        metadata={
            "n": n, "k": k, "tau_set": list(tau_set), "snr_db": list(snr), "m": m,
            "m_large": m_large, "trials": trials, "trials_mlp": trials_mlp, "seed": seed,
            "hyperparameters": hyper.to_dict(), "training": training_meta,
        },
        estimators=saved,
        plot=PlotSpec(x="snr_db", y=["mse"], group_by="estimator", log_y=True,
                      xlabel="SNR (dB)", ylabel="MSE",
                      title=f"Quasi-stationary channel (N={n}, K={k})"),
    )


class DnnQuasiRunner(BaseRunner):
    name = "dnn-quasi"
    description = "MLP vs robust LMMSE on quasi-stationary channels"
    options = (
        "n", "k", "tau_set", "snr", "m", "m_large", "trials", "trials_mlp", "hyper",
        "max_epochs", "batch_size", "seed", "workers",
    )

    def run(self, **kwargs: Any) -> RunResult:
        return run_dnn_quasi(**kwargs)

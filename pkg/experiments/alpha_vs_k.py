"""experiments/alpha_vs_k.py — Scaled MSE difference versus input dimension."""

from __future__ import annotations

import logging
from typing import Any, Dict, Optional, Sequence

from channel.ofdm import OfdmConfig, PdpKind, PdpSpec
from experiments.artifacts import PlotSpec
from experiments.base import BaseRunner, RunResult, check
from experiments.linear_vs_lmmse import LINEAR_TRIALS, compare_trained_linear

logger = logging.getLogger(__name__)


def dft_size_for(usable: int, nulls: int = 4) -> int:
    """Smallest power of two above ``usable + nulls``."""
    n = 4
    while n <= usable + nulls:
        n *= 2
    return n


def run_alpha_vs_k(
    k: Sequence[int] = (4, 12, 30, 60, 120),
    m: int = 600,
    tau_max: int = 2,
    snr: Sequence[float] = (-10.0, -5.0, 0.0, 10.0, 20.0),
    trials: int = LINEAR_TRIALS,
    n: Optional[int] = None,
    seed: int = 1,
    workers: int = 1,
) -> RunResult:
    pdp = PdpSpec(PdpKind.EXPONENTIAL, tau_max)
    header = ["k", "n", "snr_db", "mse_trained", "se_trained", "mse_opt",
              "alpha_hat", "alpha_se", "alpha_exact", "alpha_expected"]
    rows = []
    alpha: Dict[float, Dict[int, float]] = {s: {} for s in snr}
    alpha_se: Dict[float, Dict[int, float]] = {s: {} for s in snr}

    for ki, k_val in enumerate(k):
        n_val = n or dft_size_for(k_val)
        cfg = OfdmConfig(n_val, k_val)
        for si, snr_db in enumerate(snr):
            res = compare_trained_linear(
                cfg, pdp, snr_db, m, trials, seed, (ki, si), workers, with_lmmse=False
            )
            rows.append([k_val, n_val, snr_db, res.mse_trained, res.se_trained, res.mse_opt,
                         res.alpha_hat, res.alpha_se, res.alpha_exact, res.alpha_expected])
            alpha[snr_db][k_val] = res.alpha_hat
            alpha_se[snr_db][k_val] = res.alpha_se

    checks = []
    ks = sorted(k)
    if 0.0 in alpha:
        at0, se0 = alpha[0.0], alpha_se[0.0]
        for a, b in zip(ks, ks[1:]):
            checks.append(check(
                f"alpha_hat non-decreasing K={a}->{b} at 0 dB",
                at0[b] >= at0[a] - (se0[a] + se0[b]),
                f"{at0[a]:.4f} -> {at0[b]:.4f}",
            ))
        for k_val in ks:
            if k_val < 60:
                checks.append(check(f"alpha_hat < 0.1 (K={k_val}, 0 dB)", at0[k_val] < 0.1, f"{at0[k_val]:.4f}"))
        if 4 in at0:
            checks.append(check("alpha_hat < 0.02 (K=4, 0 dB)", at0[4] < 0.02, f"{at0[4]:.4f}"))
        if 60 in at0 and 120 in at0:
            checks.append(check(
                "alpha_hat(K=120) > alpha_hat(K=60) at 0 dB",
                at0[120] > at0[60],
                f"{at0[60]:.4f} -> {at0[120]:.4f}",
            ))
    if 12 in ks and 120 in ks:
        for snr_db in snr:
            checks.append(check(
                f"alpha_hat(K=120) > alpha_hat(K=12) at {snr_db:g} dB",
                alpha[snr_db][120] > alpha[snr_db][12],
            ))

    return RunResult(
        success=True,
        name="alpha-vs-k",
        header=header,
        rows=rows,
        checks=checks,
        metadata={"k": list(k), "m": m, "tau_max": tau_max, "snr_db": list(snr),
                  "trials": trials, "n": n, "seed": seed},
        plot=PlotSpec(x="k", y=["alpha_hat"], group_by="snr_db", xlabel="input dimension K",
                      ylabel="scaled MSE difference", title=f"alpha vs K (M={m})"),
    )


class AlphaVsKRunner(BaseRunner):
    name = "alpha-vs-k"
    description = "Scaled MSE difference of the trained linear module versus K"
    options = ("k", "m", "tau_max", "snr", "trials", "n", "seed", "workers")

    def run(self, **kwargs: Any) -> RunResult:
        return run_alpha_vs_k(**kwargs)

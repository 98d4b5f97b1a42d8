"""experiments/alpha_vs_m.py — Scaled MSE difference versus training-set size."""

from __future__ import annotations

import logging
import math
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from channel.ofdm import OfdmConfig, PdpKind, PdpSpec
from experiments.artifacts import PlotSpec
from experiments.base import BaseRunner, RunResult, check
from experiments.linear_vs_lmmse import LINEAR_TRIALS, compare_trained_linear

logger = logging.getLogger(__name__)

DEFAULT_FACTORS = (1.2, 1.5, 2.0, 3.0, 5.0, 8.0, 10.0, 12.0, 16.0, 20.0)


def required_size(curve: Sequence[Tuple[int, float]], alpha_target: float) -> Optional[float]:
    """Training size where ``alpha`` first drops to the target.

    Interpolates linearly in log-log between the two grid points straddling
    the target; None if the curve never reaches it.
    """
    points = sorted(curve)
    for (m0, a0), (m1, a1) in zip(points, points[1:]):
        if a0 > alpha_target >= a1:
            if a1 <= 0:
                return float(m1)
            t = (math.log(alpha_target) - math.log(a0)) / (math.log(a1) - math.log(a0))
            return math.exp(math.log(m0) + t * (math.log(m1) - math.log(m0)))
    if points and points[0][1] <= alpha_target:
        return float(points[0][0])
    return None


def run_alpha_vs_m(
    n: int = 256,
    k: Sequence[int] = (120, 180, 240),
    m_factors: Sequence[float] = DEFAULT_FACTORS,
    tau_max: int = 2,
    snr: float = 0.0,
    alpha_target: float = 0.1,
    trials: int = LINEAR_TRIALS,
    seed: int = 1,
    workers: int = 1,
) -> RunResult:
    pdp = PdpSpec(PdpKind.EXPONENTIAL, tau_max)
    header = ["k", "m", "m_over_k", "mse_trained", "se_trained", "mse_opt",
              "alpha_hat", "alpha_se", "alpha_exact", "alpha_expected"]
    rows: List[List[Any]] = []
    exact: Dict[int, List[Tuple[int, float]]] = {}
    hat: Dict[int, Dict[float, float]] = {}

    for ki, k_val in enumerate(k):
        cfg = OfdmConfig(n, k_val)
        exact[k_val], hat[k_val] = [], {}
        for mi, factor in enumerate(m_factors):
            m_val = int(round(factor * k_val))
            res = compare_trained_linear(
                cfg, pdp, snr, m_val, trials, seed, (ki, mi), workers, with_lmmse=False
            )
            rows.append([k_val, m_val, factor, res.mse_trained, res.se_trained, res.mse_opt,
                         res.alpha_hat, res.alpha_se, res.alpha_exact, res.alpha_expected])
            exact[k_val].append((m_val, res.alpha_exact))
            hat[k_val][factor] = res.alpha_hat

    m_req = {k_val: required_size(exact[k_val], alpha_target) for k_val in k}
    checks = []
    found = [(k_val, m_req[k_val]) for k_val in sorted(k)]
    checks.append(check(
        f"required M reaches alpha={alpha_target:g} for every K",
        all(v is not None for _, v in found),
        ", ".join(f"K={kv}: {v:.0f}" if v else f"K={kv}: none" for kv, v in found),
    ))
    if all(v is not None for _, v in found):
        values = [v for _, v in found]
        checks.append(check(
            "required M increases with K", all(b > a for a, b in zip(values, values[1:]))
        ))
        ratios = [v / kv for kv, v in found]
        checks.append(check(
            "M_req/K within a factor 1.5 across K",
            max(ratios) / min(ratios) < 1.5,
            ", ".join(f"{r:.2f}" for r in ratios),
        ))
    for k_val in k:
        if 1.2 in hat[k_val]:
            checks.append(check(f"alpha_hat > 0.3 at M=1.2K (K={k_val})", hat[k_val][1.2] > 0.3,
                                f"{hat[k_val][1.2]:.3f}"))
        if 20.0 in hat[k_val]:
            checks.append(check(f"alpha_hat < 0.1 at M=20K (K={k_val})", hat[k_val][20.0] < 0.1,
                                f"{hat[k_val][20.0]:.4f}"))

    return RunResult(
        success=True,
        name="alpha-vs-m",
        header=header,
        rows=rows,
        checks=checks,
        metadata={
            "n": n, "k": list(k), "m_factors": list(m_factors), "tau_max": tau_max,
            "snr_db": snr, "trials": trials, "seed": seed, "alpha_target": alpha_target,
            "required_m": {str(kv): (None if v is None else float(np.round(v, 1))) for kv, v in m_req.items()},
        },
        plot=PlotSpec(x="m", y=["alpha_hat", "alpha_exact"], group_by="k", log_y=True,
                      xlabel="training size M", ylabel="scaled MSE difference",
                      title=f"alpha vs M (N={n}, {snr:g} dB)"),
    )


class AlphaVsMRunner(BaseRunner):
    name = "alpha-vs-m"
    description = "Scaled MSE difference of the trained linear module versus M"
    options = ("n", "k", "m_factors", "tau_max", "snr", "alpha_target", "trials", "seed", "workers")

    def run(self, **kwargs: Any) -> RunResult:
        return run_alpha_vs_m(**kwargs)

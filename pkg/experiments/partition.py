"""experiments/partition.py — Splitting a wide OFDM symbol into sub-symbols.

Each block of contiguous subcarriers gets its own trained linear module,
fitted on the same M training symbols restricted to that block.  Smaller
blocks need fewer samples but ignore correlation across block edges.
"""

from __future__ import annotations

import logging
from typing import Any, Dict, Mapping, Sequence

import numpy as np

from channel.ofdm import ChannelScenario, OfdmConfig, PdpKind, PdpSpec, freq_correlation
from estimators.base import LsIdentity
from estimators.linear import BlockLinearEstimator, linear_mse_exact, lmmse_mse_theoretical, train_linear
from experiments.artifacts import PlotSpec
from experiments.base import BaseRunner, RunResult, check
from experiments.dataset import generate_training_set, partition_positions
from experiments.evaluation import evaluate_many
from experiments.linear_vs_lmmse import LINEAR_TRIALS
from experiments.rng import Stream, make_rng

logger = logging.getLogger(__name__)


def train_blocks(training, cfg: OfdmConfig, block: int) -> BlockLinearEstimator:
    """One least-squares weight matrix per block position."""
    blocks = [(pos, train_linear(training.restrict(pos))) for pos in partition_positions(cfg, block)]
    return BlockLinearEstimator(blocks, cfg.usable_count)


def average_mse_db(mse: Sequence[float]) -> float:
    """Mean of ``10 log10(mse)`` over an SNR sweep."""
    return float(np.mean(10.0 * np.log10(np.asarray(mse, dtype=float))))


def recommend_block(mse_by_block: Mapping[int, Sequence[float]]) -> int:
    """Block size with the lowest MSE averaged in dB over the SNR sweep.

    Every SNR point weighs the same in dB.  Ties go to the smaller block.
    """
    if not mse_by_block:
        raise ValueError("no block results to compare")
    return min(mse_by_block, key=lambda b: (average_mse_db(mse_by_block[b]), b))


def run_partition(
    n: int = 512,
    k: int = 480,
    m: int = 600,
    tau_max: int = 64,
    blocks: Sequence[int] = (30, 60, 120, 240, 480),
    snr: Sequence[float] = (-10.0, 0.0, 10.0, 20.0, 30.0),
    trials: int = LINEAR_TRIALS,
    seed: int = 1,
    workers: int = 1,
) -> RunResult:
    cfg = OfdmConfig(n, k)
    pdp = PdpSpec(PdpKind.EXPONENTIAL, tau_max)
    r_hh = freq_correlation(pdp, cfg)
    header = ["snr_db", "estimator", "block", "mse", "mse_std_error", "mse_exact", "mse_opt"]
    rows = []
    mse: Dict[int, Dict[float, float]] = {b: {} for b in blocks}
    saved: Dict[str, BlockLinearEstimator] = {}

    for si, snr_db in enumerate(snr):
        scenario = ChannelScenario.stationary(pdp, snr_db)
        sigma2 = scenario.sigma2
        mse_opt = lmmse_mse_theoretical(r_hh, sigma2)
        training = generate_training_set(scenario, cfg, m, make_rng(seed, Stream.TRAIN, si), seed)

        estimators: Dict[str, Any] = {"ls": LsIdentity(k)}
        trained = {}
        for block in blocks:
            trained[block] = train_blocks(training, cfg, block)
            estimators[f"block-{block}"] = trained[block]
        reports = evaluate_many(estimators, scenario, cfg, trials, make_rng(seed, Stream.EVAL, si), workers, mse_opt)

        ls = reports["ls"]
        rows.append([snr_db, "ls", None, ls.mse, ls.mse_std_error, sigma2, mse_opt])
        for block in blocks:
            rep = reports[f"block-{block}"]
            exact = linear_mse_exact(trained[block].as_matrix(), r_hh, sigma2)
            rows.append([snr_db, f"block-{block}", block, rep.mse, rep.mse_std_error, exact, mse_opt])
            mse[block][snr_db] = rep.mse
            saved[f"block{block}-{snr_db:g}db"] = trained[block]
        logger.info(
            "partition %g dB: %s", snr_db,
            ", ".join(f"{b}:{mse[b][snr_db]:.4g}" for b in blocks),
        )

    averaged = {b: list(mse[b].values()) for b in blocks}
    best = recommend_block(averaged)
    mse_db = {str(b): average_mse_db(averaged[b]) for b in blocks}
    checks = []
    if 60 in blocks:
        checks.append(check(
            "block 60 has the lowest SNR-averaged MSE (dB)", best == 60,
            f"best={best}, " + ", ".join(f"{b}:{mse_db[str(b)]:.2f} dB" for b in blocks),
        ))
        if 20.0 in snr:
            for wide in (240, 480):
                if wide in blocks:
                    ratio = mse[wide][20.0] / mse[60][20.0]
                    checks.append(check(
                        f"block {wide} worse than block 60 at 20 dB",
                        ratio >= 2.0 if wide == 480 else ratio > 1.0,
                        f"ratio {ratio:.2f}",
                    ))
    if 30 in blocks and 120 in blocks and -10.0 in snr and 30.0 in snr:
        checks.append(check("block 30 beats block 120 at -10 dB", mse[30][-10.0] < mse[120][-10.0]))
        checks.append(check("block 120 beats block 30 at 30 dB", mse[120][30.0] < mse[30][30.0]))

    return RunResult(
        success=True,
        name="partition",
        header=header,
        rows=rows,
        checks=checks,
        metadata={
            "n": n, "k": k, "m": m, "tau_max": tau_max, "blocks": list(blocks),
            "snr_db": list(snr), "trials": trials, "seed": seed, "recommended_block": best,
            "average_mse_db": mse_db,
        },
        estimators=saved,
        plot=PlotSpec(x="snr_db", y=["mse"], group_by="estimator", log_y=True,
                      xlabel="SNR (dB)", ylabel="MSE",
                      title=f"Symbol partitioning (N={n}, K={k}, M={m})"),
    )


class PartitionRunner(BaseRunner):
    name = "partition"
    description = "Per-block trained linear estimators for a wide OFDM symbol"
    options = ("n", "k", "m", "tau_max", "blocks", "snr", "trials", "seed", "workers")

    def run(self, **kwargs: Any) -> RunResult:
        return run_partition(**kwargs)

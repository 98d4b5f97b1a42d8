"""experiments/evaluation.py — Monte Carlo MSE of channel estimators.

Trials are split into fixed-size chunks whose seeds are drawn up front from
the caller's generator.  Chunks may run in worker processes; their
statistics are merged in chunk order, so the result does not depend on the
worker count.  All estimators passed to :func:`evaluate_many` see the same
channel and noise draws.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

import numpy as np

from channel.ofdm import ChannelScenario, OfdmConfig, freq_correlation, observe_ls
from estimators.base import Estimator, EstimatorError, apply_estimator
from estimators.linear import PerRealizationLmmse, lmmse_mse_theoretical
from experiments.rng import chunk_seeds

logger = logging.getLogger(__name__)

_CHUNK_TRIALS = 10_000
_CHUNK_ENTRIES = 2_000_000

AnyEstimator = Union[Estimator, PerRealizationLmmse]


@dataclass
class RunningStats:
    """Count, mean and sum of squared deviations of a stream of values."""

    n: int = 0
    mean: float = 0.0
    m2: float = 0.0

    @classmethod
    def of(cls, values: np.ndarray) -> "RunningStats":
        values = np.asarray(values, dtype=float).ravel()
        if values.size == 0:
            return cls()
        mean = float(values.mean())
        return cls(values.size, mean, float(np.sum((values - mean) ** 2)))

    def merge(self, other: "RunningStats") -> "RunningStats":
        if other.n == 0:
            return replace(self)
        if self.n == 0:
            return replace(other)
        n = self.n + other.n
        delta = other.mean - self.mean
        mean = self.mean + delta * other.n / n
        m2 = self.m2 + other.m2 + delta * delta * self.n * other.n / n
        return RunningStats(n, mean, m2)

    def update(self, values: np.ndarray) -> "RunningStats":
        return self.merge(RunningStats.of(values))

    @property
    def variance(self) -> float:
        return self.m2 / (self.n - 1) if self.n > 1 else 0.0

    @property
    def std_error(self) -> float:
        return math.sqrt(self.variance / self.n) if self.n else math.nan


@dataclass
class EvalReport:
    estimator_id: str
    scenario: str
    snr_db: float
    n_trials: int
    mse: float
    mse_std_error: float
    alpha: Optional[float] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __str__(self) -> str:
        alpha = "" if self.alpha is None else f" alpha={self.alpha:.4f}"
        return (
            f"{self.estimator_id} @ {self.snr_db:g} dB: mse={self.mse:.5g}"
            f" ± {self.mse_std_error:.2g}{alpha}"
        )


def scaled_mse_difference(mse_learned: float, mse_opt: float) -> float:
    """``(mse_learned - mse_opt) / mse_opt``; may be slightly negative from noise."""
    if mse_opt <= 0:
        raise ValueError(f"mse_opt must be positive, got {mse_opt}")
    return (mse_learned - mse_opt) / mse_opt


def optimal_mse(scenario: ChannelScenario, cfg: OfdmConfig) -> Optional[float]:
    """Analytic LMMSE MSE for stationary scenarios with noise; otherwise None."""
    if not scenario.is_stationary or scenario.sigma2 <= 0:
        return None
    try:
        return lmmse_mse_theoretical(freq_correlation(scenario.pdp, cfg), scenario.sigma2)
    except EstimatorError:
        logger.warning("No analytic LMMSE MSE for %s at %g dB", scenario.describe(), scenario.snr_db)
        return None


# ---------------------------------------------------------------------------
# Chunked evaluation
# ---------------------------------------------------------------------------

def _apply(estimator: AnyEstimator, h_ls: np.ndarray, taus: np.ndarray) -> np.ndarray:
    if isinstance(estimator, PerRealizationLmmse):
        return estimator.apply(h_ls, taus)
    return apply_estimator(estimator, h_ls)


def _eval_chunk(
    args: Tuple[Mapping[str, AnyEstimator], ChannelScenario, OfdmConfig, int, int]
) -> Dict[str, RunningStats]:
    estimators, scenario, cfg, n, seed = args
    rng = np.random.default_rng(seed)
    cfr, taus = scenario.sample(cfg, n, rng)
    h_ls = observe_ls(cfr, scenario.sigma2, rng)
    stats = {}
    for key, estimator in estimators.items():
        err = _apply(estimator, h_ls, taus) - cfr
        per_trial = np.sum(err.real ** 2 + err.imag ** 2, axis=1) / cfg.usable_count
        stats[key] = RunningStats.of(per_trial)
    return stats


def _chunk_sizes(n_trials: int, dimension: int) -> List[int]:
    size = max(1, min(_CHUNK_TRIALS, _CHUNK_ENTRIES // dimension))
    full, rest = divmod(n_trials, size)
    return [size] * full + ([rest] if rest else [])


def evaluate_many(
    estimators: Mapping[str, AnyEstimator],
    scenario: ChannelScenario,
    cfg: OfdmConfig,
    n_trials: int,
    rng: np.random.Generator,
    workers: int = 1,
    mse_opt: Optional[float] = None,
) -> Dict[str, EvalReport]:
    """Evaluate several estimators on shared draws; one report per key."""
    if n_trials < 1:
        raise ValueError(f"n_trials must be >= 1, got {n_trials}")
    if not estimators:
        return {}
    scenario.check_against(cfg)
    sizes = _chunk_sizes(n_trials, cfg.usable_count)
    seeds = chunk_seeds(rng, len(sizes))
    jobs = [(dict(estimators), scenario, cfg, n, int(s)) for n, s in zip(sizes, seeds)]

    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            partials = list(pool.map(_eval_chunk, jobs))
    else:
        partials = [_eval_chunk(job) for job in jobs]

    if mse_opt is None:
        mse_opt = optimal_mse(scenario, cfg)

    reports = {}
    for key in estimators:
        total = RunningStats()
        for part in partials:
            total = total.merge(part[key])
        alpha = None if mse_opt is None else scaled_mse_difference(total.mean, mse_opt)
        reports[key] = EvalReport(
            estimator_id=key,
            scenario=scenario.describe(),
            snr_db=scenario.snr_db,
            n_trials=total.n,
            mse=total.mean,
            mse_std_error=total.std_error,
            alpha=alpha,
            metadata={"mse_opt": mse_opt, "chunks": len(jobs)},
        )
        logger.debug("%s", reports[key])
    return reports


def evaluate_mse(
    estimator: AnyEstimator,
    scenario: ChannelScenario,
    cfg: OfdmConfig,
    n_trials: int,
    rng: np.random.Generator,
    workers: int = 1,
    mse_opt: Optional[float] = None,
) -> EvalReport:
    """Monte Carlo per-subcarrier MSE of one estimator on fresh draws."""
    key = getattr(estimator, "name", "") or type(estimator).__name__
    return evaluate_many({key: estimator}, scenario, cfg, n_trials, rng, workers, mse_opt)[key]


def evaluate_per_realization_lmmse(
    scenario: ChannelScenario,
    cfg: OfdmConfig,
    n_trials: int,
    rng: np.random.Generator,
    workers: int = 1,
) -> EvalReport:
    kind = scenario.pdp.kind if scenario.pdp is not None else scenario.kind
    genie = PerRealizationLmmse(cfg, kind, scenario.sigma2)
    return evaluate_mse(genie, scenario, cfg, n_trials, rng, workers)

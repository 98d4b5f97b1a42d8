"""experiments/dataset.py — Training sets and symbol partitioning."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from channel.ofdm import ChannelScenario, OfdmConfig, observe_ls

logger = logging.getLogger(__name__)


class NonDivisibleError(ValueError):
    """The block size does not divide the number of usable subcarriers."""


@dataclass(frozen=True, eq=False)
class TrainingSet:
    """M pairs of (LS estimate, true CFR), one per independent realization."""

    inputs: np.ndarray
    labels: np.ndarray
    scenario: Optional[ChannelScenario] = None
    seed: Optional[int] = None
    taus: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        inputs = np.asarray(self.inputs, dtype=np.complex128)
        labels = np.asarray(self.labels, dtype=np.complex128)
        if inputs.ndim != 2 or inputs.shape != labels.shape:
            raise ValueError(
                f"inputs {inputs.shape} and labels {labels.shape} must be equal (M, D) arrays"
            )
        if inputs.shape[0] < 1:
            raise ValueError("a training set needs at least one sample")
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "labels", labels)

    @property
    def size(self) -> int:
        return self.inputs.shape[0]

    @property
    def dimension(self) -> int:
        return self.inputs.shape[1]

    def restrict(self, positions: np.ndarray) -> "TrainingSet":
        """The same samples seen only on the given subcarrier positions."""
        positions = np.asarray(positions, dtype=np.int64)
        return TrainingSet(
            inputs=self.inputs[:, positions],
            labels=self.labels[:, positions],
            scenario=self.scenario,
            seed=self.seed,
            taus=self.taus,
        )


def generate_training_set(
    scenario: ChannelScenario,
    cfg: OfdmConfig,
    size: int,
    rng: np.random.Generator,
    seed: Optional[int] = None,
) -> TrainingSet:
    """Draw *size* independent realizations and their LS observations."""
    if size < 1:
        raise ValueError(f"training set size must be >= 1, got {size}")
    scenario.check_against(cfg)
    cfr, taus = scenario.sample(cfg, size, rng)
    h_ls = observe_ls(cfr, scenario.sigma2, rng)
    logger.debug(
        "Generated %d training pairs (K=%d, %s, snr=%g dB)",
        size, cfg.usable_count, scenario.describe(), scenario.snr_db,
    )
    return TrainingSet(inputs=h_ls, labels=cfr, scenario=scenario, seed=seed, taus=taus)


def partition_positions(cfg: OfdmConfig, block: int) -> List[np.ndarray]:
    """Contiguous runs of ``block`` positions covering ``0..K-1``."""
    k = cfg.usable_count
    if block < 1 or k % block:
        raise NonDivisibleError(f"block size {block} does not divide K={k}")
    return [np.arange(start, start + block) for start in range(0, k, block)]


def partition_symbol(cfg: OfdmConfig, block: int) -> List[np.ndarray]:
    """Usable subcarrier indices split into ``K / block`` contiguous blocks."""
    indices = cfg.indices
    return [indices[pos] for pos in partition_positions(cfg, block)]

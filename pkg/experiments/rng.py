"""experiments/rng.py — Deterministic random streams derived from a master seed.

Each consumer asks for a generator keyed by ``(stream, *indices)``.  Keys
that differ in any position give statistically independent streams, so
training data, evaluation data, network initialization and oracle draws
can never overlap.
"""

from __future__ import annotations

from enum import IntEnum

import numpy as np


class Stream(IntEnum):
    TRAIN = 1
    EVAL = 2
    INIT = 3
    ORACLE = 4


def make_rng(seed: int, *key: int) -> np.random.Generator:
    """Generator for the stream ``key`` under master *seed*."""
    spawn_key = tuple(int(k) for k in key)
    if any(k < 0 for k in spawn_key):
        raise ValueError(f"stream keys must be non-negative, got {spawn_key}")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=spawn_key)))


def chunk_seeds(rng: np.random.Generator, n_chunks: int) -> np.ndarray:
    """Independent integer seeds for work chunks, drawn in the parent process."""
    return rng.integers(0, 2**63 - 1, size=n_chunks, dtype=np.int64)

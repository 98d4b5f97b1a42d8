"""tests/test_dataset.py — Unit tests for training sets, partitions and random streams."""

from __future__ import annotations

import numpy as np
import pytest
from scipy import stats

from channel.ofdm import ChannelScenario, OfdmConfig, PdpKind, PdpSpec
from experiments.dataset import (
    NonDivisibleError,
    TrainingSet,
    generate_training_set,
    partition_positions,
    partition_symbol,
)
from experiments.rng import Stream, chunk_seeds, make_rng


@pytest.fixture
def scenario():
    return ChannelScenario.stationary(PdpSpec(PdpKind.EXPONENTIAL, 2), 10.0)


class TestTrainingSet:
    def test_shapes(self, scenario):
        training = generate_training_set(scenario, OfdmConfig(16, 4), 50, np.random.default_rng(1), seed=9)
        assert training.size == 50
        assert training.dimension == 4
        assert training.seed == 9
        assert training.scenario is scenario

    def test_noiseless_inputs_equal_labels(self):
        noiseless = ChannelScenario.stationary(PdpSpec(PdpKind.EXPONENTIAL, 2), float("inf"))
        training = generate_training_set(noiseless, OfdmConfig(16, 4), 20, np.random.default_rng(2))
        assert np.array_equal(training.inputs, training.labels)

    def test_same_generator_same_set(self, scenario):
        cfg = OfdmConfig(16, 4)
        a = generate_training_set(scenario, cfg, 30, make_rng(5, Stream.TRAIN, 0))
        b = generate_training_set(scenario, cfg, 30, make_rng(5, Stream.TRAIN, 0))
        assert np.array_equal(a.inputs, b.inputs)
        assert np.array_equal(a.labels, b.labels)

    def test_rejects_bad_shapes(self):
        with pytest.raises(ValueError):
            TrainingSet(inputs=np.ones((3, 4)), labels=np.ones((3, 5)))
        with pytest.raises(ValueError):
            TrainingSet(inputs=np.ones(4), labels=np.ones(4))

    def test_rejects_empty_size(self, scenario):
        with pytest.raises(ValueError):
            generate_training_set(scenario, OfdmConfig(16, 4), 0, np.random.default_rng(0))

    def test_delay_beyond_cp(self):
        wide = ChannelScenario.stationary(PdpSpec(PdpKind.EXPONENTIAL, 8), 0.0)
        with pytest.raises(ValueError):
            generate_training_set(wide, OfdmConfig(16, 4), 10, np.random.default_rng(0))

    def test_restrict(self, scenario):
        training = generate_training_set(scenario, OfdmConfig(16, 8), 10, np.random.default_rng(3))
        sub = training.restrict(np.array([2, 3]))
        assert sub.dimension == 2
        assert np.array_equal(sub.inputs, training.inputs[:, 2:4])

    def test_quasi_stationary_delays_uniform(self):
        taus = tuple(range(1, 17))
        quasi = ChannelScenario.quasi_stationary(taus, 10.0)
        training = generate_training_set(quasi, OfdmConfig(64, 60), 16_000, np.random.default_rng(4))
        counts = np.bincount(training.taus, minlength=17)[1:]
        assert stats.chisquare(counts).pvalue > 1e-3


class TestPartition:
    def test_single_block(self):
        cfg = OfdmConfig(16, 4)
        blocks = partition_symbol(cfg, 4)
        assert len(blocks) == 1
        assert list(blocks[0]) == list(cfg.usable_indices)

    def test_blocks_cover_symbol_in_order(self):
        cfg = OfdmConfig(512, 480)
        blocks = partition_symbol(cfg, 60)
        assert len(blocks) == 8
        assert list(np.concatenate(blocks)) == list(cfg.usable_indices)
        assert all(len(b) == 60 for b in blocks)

    def test_positions(self):
        positions = partition_positions(OfdmConfig(16, 8), 2)
        assert [list(p) for p in positions] == [[0, 1], [2, 3], [4, 5], [6, 7]]

    @pytest.mark.parametrize("block", [0, 7, 9])
    def test_non_divisible(self, block):
        with pytest.raises(NonDivisibleError):
            partition_symbol(OfdmConfig(16, 8), block)


class TestStreams:
    def test_same_key_same_stream(self):
        assert make_rng(1, Stream.TRAIN, 3).random() == make_rng(1, Stream.TRAIN, 3).random()

    def test_keys_are_independent(self):
        draws = {
            make_rng(1, Stream.TRAIN, 0).random(),
            make_rng(1, Stream.EVAL, 0).random(),
            make_rng(1, Stream.TRAIN, 1).random(),
            make_rng(2, Stream.TRAIN, 0).random(),
        }
        assert len(draws) == 4

    def test_negative_key(self):
        with pytest.raises(ValueError):
            make_rng(1, -1)

    def test_chunk_seeds(self):
        seeds = chunk_seeds(np.random.default_rng(0), 5)
        assert seeds.shape == (5,)
        assert np.array_equal(seeds, chunk_seeds(np.random.default_rng(0), 5))

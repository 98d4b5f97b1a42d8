"""tests/test_linear.py — Unit tests for LMMSE, robust LMMSE and trained linear weights."""

from __future__ import annotations

import numpy as np
import pytest

from channel.ofdm import ChannelScenario, OfdmConfig, PdpKind, PdpSpec, freq_correlation
from estimators.base import DimensionMismatchError, IllConditionedError, LsIdentity, RankDeficientError
from estimators.linear import (
    BlockLinearEstimator,
    LinearEstimator,
    LinearWeights,
    PerRealizationLmmse,
    apply_linear,
    linear_mse_exact,
    lmmse_mse_per_subcarrier,
    lmmse_mse_theoretical,
    lmmse_row,
    lmmse_weights,
    robust_lmmse_weights,
    train_linear,
)
from experiments.dataset import TrainingSet, generate_training_set
from experiments.evaluation import evaluate_many


@pytest.fixture
def cfg():
    return OfdmConfig(16, 4)


@pytest.fixture
def r_hh(cfg):
    return freq_correlation(PdpSpec(PdpKind.EXPONENTIAL, 2), cfg)


class TestLmmseWeights:
    def test_scalar_wiener(self):
        w = lmmse_weights(np.array([[1.0]]), 1.0)
        assert w.matrix[0, 0] == pytest.approx(0.5)
        assert lmmse_mse_theoretical(np.array([[1.0]]), 1.0) == pytest.approx(0.5)

    def test_noiseless_limit_is_identity(self, cfg):
        r = freq_correlation(PdpSpec(PdpKind.EXPONENTIAL, 4), cfg)
        assert np.allclose(lmmse_weights(r, 0.0).matrix, np.eye(4), atol=1e-8)

    def test_normal_equation(self, r_hh):
        w = lmmse_weights(r_hh, 0.3).matrix
        assert np.allclose(w @ (r_hh + 0.3 * np.eye(4)), r_hh, atol=1e-10)

    def test_singular_correlation_without_noise(self, cfg):
        flat = freq_correlation(PdpSpec(PdpKind.EXPONENTIAL, 0), cfg)
        with pytest.raises(IllConditionedError):
            lmmse_weights(flat, 0.0)

    def test_row_matches_matrix(self, r_hh):
        w = lmmse_weights(r_hh, 0.1).matrix
        for k in range(4):
            assert np.allclose(lmmse_row(r_hh, 0.1, k), w[k])

    def test_mse_monotone_in_noise(self, r_hh):
        values = [lmmse_mse_theoretical(r_hh, s) for s in (0.01, 0.1, 1.0, 10.0)]
        assert all(a < b for a, b in zip(values, values[1:]))
        assert lmmse_mse_theoretical(r_hh, 1e6) == pytest.approx(1.0, abs=1e-5)

    def test_mse_below_noise(self, r_hh):
        for sigma2 in (0.01, 0.1, 1.0):
            assert lmmse_mse_theoretical(r_hh, sigma2) < sigma2

    def test_per_subcarrier_average(self, r_hh):
        per = lmmse_mse_per_subcarrier(r_hh, 0.1)
        assert per.shape == (4,)
        assert np.mean(per) == pytest.approx(lmmse_mse_theoretical(r_hh, 0.1))

    def test_exact_mse_of_wiener_is_theoretical(self, r_hh):
        w = lmmse_weights(r_hh, 0.2)
        assert linear_mse_exact(w, r_hh, 0.2) == pytest.approx(lmmse_mse_theoretical(r_hh, 0.2))

    def test_exact_mse_of_identity_and_zero(self, r_hh):
        assert linear_mse_exact(np.eye(4), r_hh, 0.2) == pytest.approx(0.2)
        assert linear_mse_exact(np.zeros((4, 4)), r_hh, 0.2) == pytest.approx(1.0)


class TestRobustLmmse:
    def test_flat_design_uses_all_ones(self, cfg):
        robust = robust_lmmse_weights(0, cfg, 0.1).matrix
        expected = lmmse_weights(np.ones((4, 4)), 0.1).matrix
        assert np.allclose(robust, expected)

    def test_matches_uniform_pdp(self, cfg):
        r_uniform = freq_correlation(PdpSpec(PdpKind.UNIFORM, 3), cfg)
        assert np.allclose(robust_lmmse_weights(3, cfg, 0.5).matrix, lmmse_weights(r_uniform, 0.5).matrix)

    def test_never_beats_matched_wiener(self, cfg, r_hh):
        robust = robust_lmmse_weights(4, cfg, 0.1)
        assert linear_mse_exact(robust, r_hh, 0.1) >= lmmse_mse_theoretical(r_hh, 0.1) - 1e-12


class TestApplication:
    def test_matches_explicit_sum(self):
        rng = np.random.default_rng(3)
        w = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        h = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        expected = [sum(w[k, j] * h[j] for j in range(3)) for k in range(3)]
        assert np.allclose(apply_linear(LinearWeights(w), h), expected)

    def test_stack_matches_rows(self):
        rng = np.random.default_rng(4)
        w = LinearWeights(rng.standard_normal((3, 3)))
        stack = rng.standard_normal((5, 3)) + 0j
        out = apply_linear(w, stack)
        for row_in, row_out in zip(stack, out):
            assert np.allclose(apply_linear(w, row_in), row_out)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            apply_linear(LinearWeights(np.eye(3)), np.ones(4))
        with pytest.raises(DimensionMismatchError):
            LinearEstimator(LinearWeights(np.eye(3))).apply(np.ones((2, 4)))

    def test_weights_validated_and_frozen(self):
        with pytest.raises(ValueError):
            LinearWeights(np.ones((2, 3)))
        with pytest.raises(ValueError):
            LinearWeights(np.array([[np.nan]]))
        w = LinearWeights(np.eye(2))
        with pytest.raises(ValueError):
            w.matrix[0, 0] = 2.0

    def test_ls_identity(self):
        h = np.array([1 + 1j, 2 - 1j])
        assert np.array_equal(LsIdentity(2).apply(h), h)


class TestBlockLinear:
    def test_block_diagonal_matrix(self):
        blocks = [(np.array([0, 1]), LinearWeights(2 * np.eye(2))), (np.array([2, 3]), LinearWeights(np.ones((2, 2))))]
        est = BlockLinearEstimator(blocks, 4)
        full = est.as_matrix()
        assert np.allclose(full[:2, 2:], 0)
        assert np.allclose(full[2:, :2], 0)
        h = np.array([1.0, 2.0, 3.0, 4.0]) + 0j
        assert np.allclose(est.apply(h), full @ h)
        assert est.describe()["block_sizes"] == [2, 2]

    def test_positions_must_partition(self):
        with pytest.raises(ValueError):
            BlockLinearEstimator([(np.array([0, 1]), LinearWeights(np.eye(2)))], 3)

    def test_weight_size_must_match_block(self):
        with pytest.raises(DimensionMismatchError):
            BlockLinearEstimator([(np.array([0, 1]), LinearWeights(np.eye(3)))], 2)


class TestTrainLinear:
    def test_scalar_closed_form(self):
        training = TrainingSet(inputs=np.array([[2 + 1j]]), labels=np.array([[3 - 1j]]))
        w = train_linear(training).matrix[0, 0]
        assert w == pytest.approx((3 - 1j) * np.conj(2 + 1j) / abs(2 + 1j) ** 2)

    def test_noiseless_recovers_identity(self, cfg):
        scenario = ChannelScenario.stationary(PdpSpec(PdpKind.EXPONENTIAL, 4), float("inf"))
        training = generate_training_set(scenario, cfg, 64, np.random.default_rng(11))
        assert np.max(np.abs(train_linear(training).matrix - np.eye(4))) < 1e-8

    def test_residual_is_minimal(self, cfg):
        scenario = ChannelScenario.stationary(PdpSpec(PdpKind.EXPONENTIAL, 2), 0.0)
        training = generate_training_set(scenario, cfg, 200, np.random.default_rng(12))
        w = train_linear(training).matrix

        def loss(matrix):
            err = training.inputs @ matrix.T - training.labels
            return float(np.sum(np.abs(err) ** 2))

        base = loss(w)
        rng = np.random.default_rng(13)
        for _ in range(5):
            bump = 1e-3 * (rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
            assert loss(w + bump) > base

    def test_too_few_samples(self):
        training = TrainingSet(inputs=np.ones((3, 4)), labels=np.ones((3, 4)))
        with pytest.raises(RankDeficientError):
            train_linear(training)

    def test_duplicated_inputs(self):
        x = np.tile(np.array([1.0, 2.0, -1.0, 0.5]), (10, 1))
        with pytest.raises(RankDeficientError):
            train_linear(TrainingSet(inputs=x, labels=x))

    def test_approaches_wiener_oracle(self, cfg, r_hh):
        scenario = ChannelScenario.stationary(PdpSpec(PdpKind.EXPONENTIAL, 2), 10.0)
        training = generate_training_set(scenario, cfg, 20_000, np.random.default_rng(14))
        trained = train_linear(training)
        excess = linear_mse_exact(trained, r_hh, 0.1) / lmmse_mse_theoretical(r_hh, 0.1) - 1.0
        assert 0.0 <= excess < 0.01


class TestWienerOracle:
    def test_monte_carlo_matches_theory(self, cfg, r_hh):
        scenario = ChannelScenario.stationary(PdpSpec(PdpKind.EXPONENTIAL, 2), 10.0)
        wiener = LinearEstimator(lmmse_weights(r_hh, 0.1), name="lmmse")
        report = evaluate_many({"lmmse": wiener}, scenario, cfg, 100_000, np.random.default_rng(15))["lmmse"]
        assert abs(report.mse - lmmse_mse_theoretical(r_hh, 0.1)) < 4 * report.mse_std_error


class TestPerRealizationLmmse:
    def test_uses_weights_of_each_delay(self):
        cfg = OfdmConfig(16, 8)
        genie = PerRealizationLmmse(cfg, PdpKind.EXPONENTIAL, 0.1)
        h = np.arange(16, dtype=float).reshape(2, 8) + 0j
        out = genie.apply(h, np.array([1, 3]))
        assert np.allclose(out[0], apply_linear(genie.weights_for(1), h[0]))
        assert np.allclose(out[1], apply_linear(genie.weights_for(3), h[1]))
        assert genie.weights_for(3) is genie.weights_for(3)

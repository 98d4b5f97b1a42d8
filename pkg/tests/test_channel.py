"""tests/test_channel.py — Unit tests for the OFDM channel model."""

from __future__ import annotations

import numpy as np
import pytest

from channel.ofdm import (
    ChannelScenario,
    OfdmConfig,
    PdpKind,
    PdpSpec,
    freq_correlation,
    observe_ls,
    pdp_powers,
    sample_channel,
    sample_channels,
)


@pytest.fixture
def cfg():
    return OfdmConfig(16, 4)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


class TestOfdmConfig:
    def test_usable_indices_centered(self, cfg):
        assert cfg.usable_indices == (14, 15, 1, 2)

    def test_odd_usable_count(self):
        assert OfdmConfig(16, 5).usable_indices == (14, 15, 1, 2, 3)

    def test_cp_len(self, cfg):
        assert cfg.cp_len == 4

    def test_dc_never_used(self):
        assert 0 not in OfdmConfig(64, 60).usable_indices

    @pytest.mark.parametrize("n,k", [(10, 4), (16, 16), (16, 0), (0, 1)])
    def test_invalid(self, n, k):
        with pytest.raises(ValueError):
            OfdmConfig(n, k)


class TestPdp:
    @pytest.mark.parametrize("kind", list(PdpKind))
    @pytest.mark.parametrize("tau", [0, 1, 2, 16, 64])
    def test_powers_normalized(self, kind, tau):
        assert abs(pdp_powers(PdpSpec(kind, tau)).sum() - 1.0) < 1e-12

    def test_single_tap(self):
        assert np.array_equal(pdp_powers(PdpSpec(PdpKind.EXPONENTIAL, 0)), [1.0])

    def test_uniform_equal(self):
        assert np.allclose(pdp_powers(PdpSpec(PdpKind.UNIFORM, 3)), 0.25)

    def test_exponential_decreasing(self):
        p = pdp_powers(PdpSpec(PdpKind.EXPONENTIAL, 8))
        assert np.all(np.diff(p) < 0)

    def test_delay_beyond_cp_rejected(self, cfg):
        with pytest.raises(ValueError):
            PdpSpec(PdpKind.EXPONENTIAL, 5).check_against(cfg)
        PdpSpec(PdpKind.EXPONENTIAL, 4).check_against(cfg)

    def test_negative_delay_rejected(self):
        with pytest.raises(ValueError):
            PdpSpec(PdpKind.UNIFORM, -1)


class TestFreqCorrelation:
    def test_flat_channel_all_ones(self, cfg):
        assert np.allclose(freq_correlation(PdpSpec(PdpKind.EXPONENTIAL, 0), cfg), 1.0)

    def test_structure(self, cfg):
        r = freq_correlation(PdpSpec(PdpKind.EXPONENTIAL, 2), cfg)
        assert np.all(np.diag(r) == 1.0)
        assert np.max(np.abs(r - r.conj().T)) < 1e-12
        assert np.linalg.eigvalsh(r).min() >= -1e-9

    def test_matches_sampled_covariance(self, cfg, rng):
        spec = PdpSpec(PdpKind.EXPONENTIAL, 2)
        cfr = sample_channels(spec, cfg, 200_000, rng)
        empirical = cfr.T @ cfr.conj() / cfr.shape[0]
        assert np.linalg.norm(empirical - freq_correlation(spec, cfg)) < 0.03

    def test_depends_on_index_differences(self):
        spec = PdpSpec(PdpKind.EXPONENTIAL, 4)
        a = freq_correlation(spec, OfdmConfig(32, 8))
        b = freq_correlation(spec, OfdmConfig(32, 9))
        assert np.allclose(a, b[:8, :8])


class TestSampling:
    def test_flat_channel_constant(self, cfg, rng):
        real = sample_channel(PdpSpec(PdpKind.EXPONENTIAL, 0), cfg, rng)
        assert np.allclose(real.cfr, real.cfr[0])

    def test_unit_power(self, cfg, rng):
        cfr = sample_channels(PdpSpec(PdpKind.EXPONENTIAL, 2), cfg, 100_000, rng)
        power = np.mean(np.abs(cfr) ** 2, axis=0)
        assert np.all(np.abs(power - 1.0) < 0.02)

    def test_deterministic(self, cfg):
        spec = PdpSpec(PdpKind.UNIFORM, 3)
        a = sample_channels(spec, cfg, 10, np.random.default_rng(7))
        b = sample_channels(spec, cfg, 10, np.random.default_rng(7))
        assert np.array_equal(a, b)

    def test_single_draw_matches_dft(self, cfg, rng):
        real = sample_channel(PdpSpec(PdpKind.EXPONENTIAL, 2), cfg, rng)
        idx = np.asarray(cfg.usable_indices)
        expected = [sum(real.taps[l] * np.exp(-2j * np.pi * i * l / 16) for l in range(3)) for i in idx]
        assert np.allclose(real.cfr, expected)


class TestObserveLs:
    def test_noiseless_exact(self, cfg, rng):
        cfr = sample_channels(PdpSpec(PdpKind.EXPONENTIAL, 2), cfg, 5, rng)
        assert np.array_equal(observe_ls(cfr, 0.0, rng), cfr)

    def test_noise_variance(self, rng):
        cfr = np.zeros(100_000, dtype=complex)
        noise = observe_ls(cfr, 0.5, rng)
        assert abs(np.mean(np.abs(noise) ** 2) - 0.5) < 0.01
        assert abs(np.var(noise.real) - 0.25) < 0.01
        assert abs(np.var(noise.imag) - 0.25) < 0.01

    def test_negative_variance_rejected(self, rng):
        with pytest.raises(ValueError):
            observe_ls(np.zeros(4), -1.0, rng)


class TestChannelScenario:
    def test_sigma2_from_snr(self):
        scenario = ChannelScenario.stationary(PdpSpec(PdpKind.EXPONENTIAL, 2), 10.0)
        assert scenario.sigma2 == pytest.approx(0.1)
        assert scenario.with_snr(0.0).sigma2 == pytest.approx(1.0)

    def test_requires_exactly_one_source(self):
        with pytest.raises(ValueError):
            ChannelScenario(snr_db=0.0)
        with pytest.raises(ValueError):
            ChannelScenario(snr_db=0.0, pdp=PdpSpec(PdpKind.UNIFORM, 1), tau_set=(1, 2))

    def test_quasi_stationary_draws(self, rng):
        cfg = OfdmConfig(64, 60)
        scenario = ChannelScenario.quasi_stationary((3, 1, 2, 2), 10.0)
        assert scenario.tau_set == (1, 2, 3)
        assert scenario.tau_upper == 3
        cfr, taus = scenario.sample(cfg, 3000, rng)
        assert cfr.shape == (3000, 60)
        assert set(np.unique(taus)) == {1, 2, 3}

    def test_stationary_taus(self, cfg, rng):
        scenario = ChannelScenario.stationary(PdpSpec(PdpKind.EXPONENTIAL, 2), 0.0)
        _, taus = scenario.sample(cfg, 4, rng)
        assert np.all(taus == 2)

"""channel/ofdm.py — OFDM frequency grid, power-delay profiles and channel draws.

The channel is a tap-delay line with integer delays ``l = 0..tau_max`` and
independent circularly-symmetric complex Gaussian taps.  Everything an
estimator sees lives on the K usable subcarriers of an N-point DFT grid:

    cfr[k] = sum_l taps[l] * exp(-j*2*pi*idx(k)*l/N)

Noise power is tied to the SNR under unit channel and pilot power, so the LS
estimate of a subcarrier is simply ``cfr + n`` with ``E|n|^2 = 10**(-snr/10)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional, Tuple

import numpy as np


class PdpKind(str, Enum):
    """Shape of the power-delay profile."""

    EXPONENTIAL = "exponential"
    UNIFORM = "uniform"


@dataclass(frozen=True)
class OfdmConfig:
    """DFT size and usable-subcarrier map of one OFDM symbol.

    The usable carriers are ``{1..ceil(K/2)}`` and ``{N-floor(K/2)..N-1}``;
    DC and the remaining spectrum-edge carriers are null.  ``usable_indices``
    lists them in frequency order (negative half first) so that contiguous
    blocks of positions are contiguous in frequency.
    """

    dft_size: int
    usable_count: int
    usable_indices: Tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        n, k = self.dft_size, self.usable_count
        if n <= 0 or n % 4 != 0:
            raise ValueError(f"dft_size must be a positive multiple of 4, got {n}")
        if not 1 <= k <= n - 1:
            raise ValueError(f"usable_count must be in [1, {n - 1}], got {k}")
        upper = list(range(1, math.ceil(k / 2) + 1))
        lower = list(range(n - k // 2, n))
        object.__setattr__(self, "usable_indices", tuple(lower + upper))

    @property
    def cp_len(self) -> int:
        return self.dft_size // 4

    @property
    def indices(self) -> np.ndarray:
        return np.asarray(self.usable_indices, dtype=np.int64)


@dataclass(frozen=True)
class PdpSpec:
    """Discrete power-delay profile: kind plus maximum delay in samples."""

    kind: PdpKind
    tau_max: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", PdpKind(self.kind))
        if int(self.tau_max) != self.tau_max or self.tau_max < 0:
            raise ValueError(f"tau_max must be a non-negative integer, got {self.tau_max}")
        object.__setattr__(self, "tau_max", int(self.tau_max))

    def check_against(self, cfg: OfdmConfig) -> None:
        """Raise ValueError if the delay spread exceeds the cyclic prefix."""
        if self.tau_max > cfg.cp_len:
            raise ValueError(
                f"tau_max={self.tau_max} exceeds the cyclic prefix "
                f"({cfg.cp_len} samples for N={cfg.dft_size})"
            )


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """One channel draw: delay-domain taps and the CFR on usable carriers."""

    taps: np.ndarray
    cfr: np.ndarray


@dataclass(frozen=True)
class ChannelScenario:
    """Channel statistics plus SNR.

    Stationary scenarios carry a fixed :class:`PdpSpec`; quasi-stationary ones
    carry a set of maximum delays from which each realization draws its own
    ``tau_max`` uniformly.
    """

    snr_db: float
    pdp: Optional[PdpSpec] = None
    tau_set: Tuple[int, ...] = ()
    kind: PdpKind = PdpKind.EXPONENTIAL

    def __post_init__(self) -> None:
        if (self.pdp is None) == (not self.tau_set):
            raise ValueError("Give either a fixed PDP or a non-empty tau_set, not both")
        if self.tau_set:
            taus = tuple(sorted({int(t) for t in self.tau_set}))
            if taus[0] < 0:
                raise ValueError("tau_set entries must be non-negative")
            object.__setattr__(self, "tau_set", taus)
        object.__setattr__(self, "kind", PdpKind(self.kind))
        object.__setattr__(self, "snr_db", float(self.snr_db))

    @classmethod
    def stationary(cls, pdp: PdpSpec, snr_db: float) -> "ChannelScenario":
        return cls(snr_db=snr_db, pdp=pdp)

    @classmethod
    def quasi_stationary(
        cls,
        tau_set: Tuple[int, ...],
        snr_db: float,
        kind: PdpKind = PdpKind.EXPONENTIAL,
    ) -> "ChannelScenario":
        return cls(snr_db=snr_db, tau_set=tuple(tau_set), kind=kind)

    @property
    def sigma2(self) -> float:
        return 10.0 ** (-self.snr_db / 10.0)

    @property
    def is_stationary(self) -> bool:
        return self.pdp is not None

    @property
    def tau_upper(self) -> int:
        if self.pdp is not None:
            return self.pdp.tau_max
        return max(self.tau_set)

    def with_snr(self, snr_db: float) -> "ChannelScenario":
        return replace(self, snr_db=snr_db)

    def describe(self) -> str:
        if self.pdp is not None:
            return f"{self.pdp.kind.value}(tau_max={self.pdp.tau_max})"
        return f"quasi-{self.kind.value}(tau in {list(self.tau_set)})"

    def check_against(self, cfg: OfdmConfig) -> None:
        PdpSpec(self.kind, self.tau_upper).check_against(cfg)

    def sample(
        self, cfg: OfdmConfig, n: int, rng: np.random.Generator
    ) -> Tuple[np.ndarray, np.ndarray]:
        """Draw ``n`` CFR vectors; returns ``(cfr (n, K), tau_max per draw)``."""
        if self.pdp is not None:
            return sample_channels(self.pdp, cfg, n, rng), np.full(n, self.pdp.tau_max)

        taus = rng.choice(np.asarray(self.tau_set, dtype=np.int64), size=n)
        cfr = np.empty((n, cfg.usable_count), dtype=np.complex128)
        for tau in self.tau_set:
            mask = taus == tau
            count = int(mask.sum())
            if count:
                cfr[mask] = sample_channels(PdpSpec(self.kind, tau), cfg, count, rng)
        return cfr, taus


# ---------------------------------------------------------------------------
# Second-order statistics
# ---------------------------------------------------------------------------

def pdp_powers(spec: PdpSpec) -> np.ndarray:
    """Tap powers ``P_l``, ``l = 0..tau_max``, normalized to unit sum."""
    if spec.tau_max == 0:
        return np.ones(1)
    if spec.kind is PdpKind.UNIFORM:
        return np.full(spec.tau_max + 1, 1.0 / (spec.tau_max + 1))
    powers = np.exp(-np.arange(spec.tau_max + 1) / spec.tau_max)
    return powers / powers.sum()


def _steering(cfg: OfdmConfig, n_taps: int) -> np.ndarray:
    """(K, L) matrix mapping delay taps to usable-carrier CFR values."""
    phase = np.outer(cfg.indices, np.arange(n_taps)) / cfg.dft_size
    return np.exp(-2j * np.pi * phase)


def freq_correlation(spec: PdpSpec, cfg: OfdmConfig) -> np.ndarray:
    """K x K correlation ``R_hh`` of the CFR on the usable carriers.

    ``R[a, b] = sum_l P_l exp(-j 2 pi (idx(a) - idx(b)) l / N)``, built as
    ``E diag(P) E^H`` so it is Hermitian PSD by construction.
    """
    spec.check_against(cfg)
    powers = pdp_powers(spec)
    steer = _steering(cfg, powers.size)
    r_hh = (steer * powers) @ steer.conj().T
    r_hh = 0.5 * (r_hh + r_hh.conj().T)
    np.fill_diagonal(r_hh, 1.0)
    return r_hh


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

def _complex_gaussian(
    rng: np.random.Generator, shape: Tuple[int, ...], variance
) -> np.ndarray:
    scale = np.sqrt(np.asarray(variance, dtype=float) / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def sample_channel(
    spec: PdpSpec, cfg: OfdmConfig, rng: np.random.Generator
) -> ChannelRealization:
    """Draw one realization; taps are independent CN(0, P_l)."""
    spec.check_against(cfg)
    powers = pdp_powers(spec)
    taps = _complex_gaussian(rng, powers.shape, powers)
    cfr = _steering(cfg, powers.size) @ taps
    return ChannelRealization(taps=taps, cfr=cfr)


def sample_channels(
    spec: PdpSpec, cfg: OfdmConfig, n: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw ``n`` independent CFR vectors as an (n, K) array."""
    spec.check_against(cfg)
    powers = pdp_powers(spec)
    taps = _complex_gaussian(rng, (n, powers.size), powers)
    return taps @ _steering(cfg, powers.size).T


def observe_ls(cfr: np.ndarray, sigma2: float, rng: np.random.Generator) -> np.ndarray:
    """LS pilot estimate ``cfr + n`` with i.i.d. CN(0, sigma2) noise.

    Works on a single vector or on a stack of vectors.
    """
    if sigma2 < 0:
        raise ValueError(f"sigma2 must be non-negative, got {sigma2}")
    cfr = np.asarray(cfr, dtype=np.complex128)
    if sigma2 == 0:
        return cfr.copy()
    return cfr + _complex_gaussian(rng, cfr.shape, sigma2)

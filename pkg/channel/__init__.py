"""channel package — OFDM grid, power-delay profiles and channel sampling."""

from channel.ofdm import (
    ChannelRealization,
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

__all__ = [
    "ChannelRealization",
    "ChannelScenario",
    "OfdmConfig",
    "PdpKind",
    "PdpSpec",
    "freq_correlation",
    "observe_ls",
    "pdp_powers",
    "sample_channel",
    "sample_channels",
]

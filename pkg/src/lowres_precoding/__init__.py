"""Low-resolution precoding for multi-user MISO-OFDM downlinks."""

from .channel import (
    FreqChannel,
    NoiseSpec,
    TapChannel,
    apply_channel,
    corrupt_csi,
    csi_error_pair,
    draw_rayleigh,
    frequency_response,
    load_taps,
    save_taps,
)
from .ofdm import Constellation, OfdmFrame, constellation, draw_data, from_time, to_time

__version__ = "0.1.0"

from .gmi import (
    NOISE_FLOOR,
    AuxChannelParams,
    DegeneratePilotsError,
    estimate_params,
    gmi_rate,
    gmi_terms,
    optimize_s,
)
from .pipeline import (
    BlockError,
    BlockTrace,
    GmiReport,
    block_rates,
    evaluate_system,
    noise_variance,
    report_from_traces,
    simulate_block,
    simulate_blocks,
)

__all__ = [
    "NOISE_FLOOR",
    "AuxChannelParams",
    "BlockError",
    "BlockTrace",
    "DegeneratePilotsError",
    "GmiReport",
    "block_rates",
    "estimate_params",
    "evaluate_system",
    "gmi_rate",
    "gmi_terms",
    "noise_variance",
    "optimize_s",
    "report_from_traces",
    "simulate_block",
    "simulate_blocks",
]

from .alphabet import TxAlphabet, quantize, quantize_indices
from .coordinate import (
    SCHEDULES,
    CoordinateState,
    coordinate_update,
    matched_filter_init,
    precode_magiq,
    precode_qcm,
)
from .cost import DegenerateInputError, cost_g, optimal_alpha
from .linear import ZFInfeasibleError, linear_mult_count, linear_precode, lmmse_weights
from .result import PrecodeResult

__all__ = [
    "SCHEDULES",
    "CoordinateState",
    "DegenerateInputError",
    "PrecodeResult",
    "TxAlphabet",
    "ZFInfeasibleError",
    "coordinate_update",
    "cost_g",
    "linear_mult_count",
    "linear_precode",
    "lmmse_weights",
    "matched_filter_init",
    "optimal_alpha",
    "precode_magiq",
    "precode_qcm",
    "quantize",
    "quantize_indices",
]

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Complex multiplications are tallied as 4 real multiplications.
REAL_MULTS_PER_COMPLEX = 4


@dataclass
class PrecodeResult:
    """Transmit sequence ``x`` (T, N) plus bookkeeping.

    ``op_count`` counts real multiplications spent in the iterative (or
    single-shot linear) stage; ``preprocessing_ops`` covers initialization.
    ``trace`` holds the cost after every coordinate and alpha update when
    tracing was requested.
    """

    x: np.ndarray
    alpha: float
    cost: float
    iterations: int = 1
    op_count: int = 0
    preprocessing_ops: int = 0
    trace: np.ndarray | None = None
    trace_kind: np.ndarray | None = field(default=None, repr=False)

    @property
    def ops_per_iteration(self) -> float:
        return self.op_count / max(self.iterations, 1)

"""Named precoders with a common call signature for the simulation pipeline."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..channel import TapChannel, frequency_response
from ..ofdm import OfdmFrame
from .alphabet import TxAlphabet, quantize
from .coordinate import SCHEDULES, precode_magiq, precode_qcm
from .cost import cost_g, optimal_alpha
from .linear import linear_precode, lmmse_weights
from .result import PrecodeResult

LINEAR = ("lp-zf", "lp-mmse", "qlp-zf", "qlp-mmse")
ITERATIVE = ("magiq", "qcm")
DEFAULT_ITERATIONS = {"magiq": 4, "qcm": 6}


@dataclass(frozen=True)
class Precoder:
    """``name`` is one of LINEAR or ITERATIVE; ``iterations`` only matters for the latter."""

    name: str
    iterations: int = 1
    schedule: str = "round-robin"

    def __post_init__(self):
        if self.name not in LINEAR + ITERATIVE:
            raise ValueError(f"unknown precoder {self.name!r}; choose from {LINEAR + ITERATIVE}")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.schedule not in SCHEDULES:
            raise ValueError(f"schedule must be one of {SCHEDULES}")

    @property
    def label(self) -> str:
        return f"{self.name}:{self.iterations}" if self.name in ITERATIVE else self.name

    @property
    def quantized(self) -> bool:
        return not self.name.startswith("lp-")

    def __call__(self, frame: OfdmFrame, channel: TapChannel, alphabet: TxAlphabet, noise_var: float,
                 rng=None, **kwargs) -> PrecodeResult:
        if self.name == "magiq":
            return precode_magiq(frame, channel, alphabet, self.iterations, noise_var, **kwargs)
        if self.name == "qcm":
            return precode_qcm(frame, channel, alphabet, self.iterations, noise_var,
                               schedule=self.schedule, seed=rng, **kwargs)
        return linear_family(self.name, frame, channel, alphabet, noise_var)


def wiener_weights(freq_ch, n_ue: int, power: float, noise_var: float) -> np.ndarray:
    # regularization K sigma^2 / P matches the filter to the normalized transmit power
    return lmmse_weights(freq_ch, power / n_ue, noise_var)


def linear_family(name: str, frame: OfdmFrame, channel: TapChannel, alphabet: TxAlphabet,
                  noise_var: float) -> PrecodeResult:
    freq_ch = frequency_response(channel, frame.t_f)
    if name.endswith("zf"):
        weights = lmmse_weights(freq_ch, 1.0, 0.0)
    else:
        weights = wiener_weights(freq_ch, frame.n_ue, alphabet.power_budget, noise_var)
    res = linear_precode(frame.freq, weights, frame.t_c, alphabet.power_budget, channel, noise_var)
    if name.startswith("qlp"):
        xq = quantize(res.x, alphabet)
        alpha = optimal_alpha(xq, channel, frame.time, noise_var) if np.any(xq) else 0.0
        res = PrecodeResult(x=xq, alpha=alpha, cost=cost_g(xq, alpha, channel, frame.time, noise_var),
                            iterations=1, op_count=res.op_count)
    return res


def parse_precoder(spec: str, schedule: str = "round-robin") -> Precoder:
    """Parse ``"qcm:6"``, ``"magiq"``, ``"lp-zf"``, ..."""
    name, _, iters = spec.strip().lower().partition(":")
    if iters:
        try:
            n_iter = int(iters)
        except ValueError:
            raise ValueError(f"bad iteration count in precoder spec {spec!r}") from None
    else:
        n_iter = DEFAULT_ITERATIONS.get(name, 1)
    if iters and name in LINEAR:
        raise ValueError(f"linear precoder {name!r} takes no iteration count")
    return Precoder(name, n_iter, schedule)

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TxAlphabet:
    """Per-antenna transmit set ``{0} U {sqrt(P/N) exp(j 2 pi q / 2^b)}``.

    ``points[0]`` is the zero symbol and ``points[1 + q]`` the phase-``q``
    symbol; that order is the tie-break order used everywhere.
    """

    power_budget: float
    n_tx: int
    phase_bits: int

    def __post_init__(self):
        if self.power_budget <= 0:
            raise ValueError("power budget must be positive")
        if self.n_tx < 1:
            raise ValueError("n_tx must be >= 1")
        if self.phase_bits < 0:
            raise ValueError("phase_bits must be >= 0")
        q = np.arange(2**self.phase_bits)
        pts = np.concatenate([[0.0], self.amplitude * np.exp(2j * np.pi * q / 2**self.phase_bits)])
        pts = pts.astype(np.complex128)
        pts.setflags(write=False)
        object.__setattr__(self, "_points", pts)

    @property
    def amplitude(self) -> float:
        return float(np.sqrt(self.power_budget / self.n_tx))

    @property
    def points(self) -> np.ndarray:
        return self._points

    @property
    def size(self) -> int:
        return self._points.size

    def contains(self, x: np.ndarray, atol: float = 1e-12) -> bool:
        x = np.asarray(x)
        return bool(np.all(np.min(np.abs(x[..., None] - self._points), axis=-1) <= atol))


def quantize_indices(x: np.ndarray, alphabet: TxAlphabet) -> np.ndarray:
    """Index of the nearest alphabet point for each entry (first index on ties)."""
    x = np.asarray(x)
    dist = np.abs(x[..., None] - alphabet.points)
    return np.argmin(dist, axis=-1)


def quantize(x: np.ndarray, alphabet: TxAlphabet) -> np.ndarray:
    """Entrywise nearest-point projection onto the alphabet.

    Exact ties go to the zero symbol first, then to the lowest phase index.
    """
    return alphabet.points[quantize_indices(x, alphabet)]

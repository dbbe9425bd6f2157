"""OFDM framing, transforms, and modulation constellations.

Grids are time/subcarrier-major: a frequency grid has shape (T_F, K) and
its cyclic-prefixed time image has shape (T_F + T_c, K).  Row ``m`` is the
vector of all UEs' symbols on subcarrier ``m``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .rng import as_generator


def _gray_to_binary(g: np.ndarray) -> np.ndarray:
    b = g.copy()
    shift = g >> 1
    while np.any(shift):
        b ^= shift
        shift >>= 1
    return b


@dataclass(frozen=True)
class Constellation:
    """Unit-energy, zero-mean symbol set; ``points[i]`` carries Gray label ``i``."""

    label: str
    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.complex128)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def size(self) -> int:
        return self.points.size

    @property
    def bits(self) -> float:
        return float(np.log2(self.size))


def qam(order: int) -> Constellation:
    side = int(round(np.sqrt(order)))
    if side * side != order or side < 2 or side & (side - 1):
        raise ValueError(f"square QAM needs an even power of two, got {order}")
    half = int(np.log2(side))
    labels = np.arange(order)
    i_idx = _gray_to_binary(labels >> half)
    q_idx = _gray_to_binary(labels & (side - 1))
    levels = 2 * np.arange(side) - (side - 1)
    pts = levels[i_idx] + 1j * levels[q_idx]
    pts = pts / np.sqrt(np.mean(np.abs(pts) ** 2))
    return Constellation(f"{order}qam" if order != 4 else "qpsk", pts)


def psk(order: int) -> Constellation:
    if order < 2 or order & (order - 1):
        raise ValueError(f"PSK order must be a power of two, got {order}")
    phase_idx = _gray_to_binary(np.arange(order))
    return Constellation(f"{order}psk", np.exp(2j * np.pi * phase_idx / order))


@lru_cache(maxsize=None)
def constellation(name: str) -> Constellation:
    """Look up a constellation by name: ``qpsk``, ``16qam``, ``64qam``, ``8psk``, ..."""
    key = name.lower().replace("-", "")
    if key == "qpsk":
        return qam(4)
    m = re.fullmatch(r"(\d+)(qam|psk)", key)
    if not m:
        raise ValueError(f"unknown constellation {name!r}")
    order = int(m.group(1))
    return qam(order) if m.group(2) == "qam" else psk(order)


def draw_data(const: Constellation, n_ue: int, t_f: int, seed=None) -> np.ndarray:
    """Uniform iid symbols, shape (t_f, n_ue)."""
    if n_ue < 1 or t_f < 1:
        raise ValueError("n_ue and t_f must be positive")
    rng = as_generator(seed)
    return const.points[rng.integers(const.size, size=(t_f, n_ue))]


def dft(x: np.ndarray, axis: int = 0) -> np.ndarray:
    """Forward DFT without scaling, ``X[m] = sum_t x[t] exp(-j 2 pi m t / T_F)``."""
    return np.fft.fft(x, axis=axis)


def idft(x: np.ndarray, axis: int = 0) -> np.ndarray:
    """Inverse DFT with 1/T_F scaling."""
    return np.fft.ifft(x, axis=axis)


def to_time(freq: np.ndarray, t_c: int) -> np.ndarray:
    """IDFT every column and prepend the last ``t_c`` samples as cyclic prefix."""
    if t_c < 0:
        raise ValueError("t_c must be >= 0")
    core = idft(np.asarray(freq), axis=0)
    if t_c > core.shape[0]:
        raise ValueError(f"t_c={t_c} exceeds the DFT length {core.shape[0]}")
    return np.concatenate([core[core.shape[0] - t_c :], core], axis=0)


def from_time(time: np.ndarray, t_f: int, t_c: int) -> np.ndarray:
    """Drop the prefix and DFT the next ``t_f`` samples."""
    time = np.asarray(time)
    if time.shape[0] < t_c + t_f:
        raise ValueError(f"need at least {t_c + t_f} samples, got {time.shape[0]}")
    return dft(time[t_c : t_c + t_f], axis=0)


@dataclass(frozen=True)
class OfdmFrame:
    """One OFDM symbol: frequency grid ``freq`` (T_F, K) and its prefixed image ``time`` (T, K)."""

    freq: np.ndarray
    time: np.ndarray
    t_c: int

    @classmethod
    def from_freq(cls, freq: np.ndarray, t_c: int) -> "OfdmFrame":
        freq = np.asarray(freq, dtype=np.complex128)
        if freq.ndim == 1:
            freq = freq[:, None]
        return cls(freq, to_time(freq, t_c), t_c)

    @property
    def t_f(self) -> int:
        return self.freq.shape[0]

    @property
    def n_slots(self) -> int:
        return self.time.shape[0]

    @property
    def n_ue(self) -> int:
        return self.freq.shape[1]

"""Multipath MIMO channels: generation, CSI corruption, application.

Tap arrays are stored as ``taps[tau, k, n]`` (shape ``L x K x N``); signal
sequences are time-major, ``x[t, n]`` and ``y[t, k]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Protocol

import numpy as np

from .rng import as_generator, complex_normal

TAP_FILE_MAGIC = "# lowres-precoding taps v1"


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class TapChannel:
    """Discrete-time impulse response ``H[0..L-1]`` between N antennas and K UEs."""

    taps: np.ndarray

    def __post_init__(self):
        taps = np.asarray(self.taps)
        if taps.ndim != 3:
            raise ValueError(f"taps must have shape (L, K, N), got {taps.shape}")
        if min(taps.shape) < 1:
            raise ValueError(f"channel dimensions must be >= 1, got {taps.shape}")
        object.__setattr__(self, "taps", _readonly(taps))

    @property
    def n_taps(self) -> int:
        return self.taps.shape[0]

    @property
    def n_ue(self) -> int:
        return self.taps.shape[1]

    @property
    def n_tx(self) -> int:
        return self.taps.shape[2]


@dataclass(frozen=True)
class FreqChannel:
    """Per-subcarrier channel matrices, ``per_subcarrier[m]`` is K x N."""

    per_subcarrier: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "per_subcarrier", _readonly(self.per_subcarrier))

    @property
    def n_subcarriers(self) -> int:
        return self.per_subcarrier.shape[0]


@dataclass(frozen=True)
class NoiseSpec:
    variance: float
    seed: object = None

    def __post_init__(self):
        if not self.variance >= 0:
            raise ValueError(f"noise variance must be >= 0, got {self.variance}")


class TapGenerator(Protocol):
    def __call__(self, n_tx: int, n_ue: int, n_taps: int, seed) -> TapChannel: ...


def draw_rayleigh(n_tx: int, n_ue: int, n_taps: int, seed=None) -> TapChannel:
    """Rayleigh taps with a uniform power delay profile, entries CN(0, 1/L)."""
    if min(n_tx, n_ue, n_taps) < 1:
        raise ValueError(f"dimensions must be >= 1 (n_tx={n_tx}, n_ue={n_ue}, n_taps={n_taps})")
    rng = as_generator(seed)
    return TapChannel(complex_normal(rng, (n_taps, n_ue, n_tx), 1.0 / n_taps))


def frequency_response(ch: TapChannel, t_f: int) -> FreqChannel:
    """DFT of the zero-padded impulse response, one K x N matrix per subcarrier."""
    if t_f < ch.n_taps:
        raise ValueError(f"t_f={t_f} is shorter than the channel (L={ch.n_taps})")
    return FreqChannel(np.fft.fft(ch.taps, n=t_f, axis=0))


def csi_error_pair(ch: TapChannel, epsilon: float, seed=None) -> tuple[TapChannel, np.ndarray]:
    """Draw the transmitter's channel estimate and the matching error term.

    Returns ``(H_est, Z)`` with ``H = sqrt(1 - eps^2) * H_est + eps * Z`` holding
    exactly.  ``H_est`` is drawn from its conditional law given ``H``, so both
    ``H_est`` and ``Z`` have per-entry variance 1/L and are mutually independent.
    """
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in [0, 1], got {epsilon}")
    rng = as_generator(seed)
    var = 1.0 / ch.n_taps
    w = complex_normal(rng, ch.taps.shape, var)
    h = ch.taps
    if epsilon == 0.0:
        return ch, np.zeros_like(h)
    rho = np.sqrt(1.0 - epsilon**2)
    est = rho * h + epsilon * w
    z = epsilon * h - rho * w
    return TapChannel(est), z


def corrupt_csi(ch: TapChannel, epsilon: float, seed=None) -> TapChannel:
    """Imperfect transmitter CSI; ``epsilon=0`` returns ``ch`` itself, 1 an independent draw."""
    return csi_error_pair(ch, epsilon, seed)[0]


def apply_channel(ch: TapChannel, x: np.ndarray, noise: NoiseSpec | None = None) -> np.ndarray:
    """Linear convolution ``y[t] = sum_tau H[tau] x[t - tau] + z[t]`` for t < T.

    ``x`` has shape (T, N); samples before t = 0 are zero.
    """
    x = np.asarray(x)
    if x.ndim != 2 or x.shape[1] != ch.n_tx:
        raise ValueError(f"x must have shape (T, {ch.n_tx}), got {x.shape}")
    n_slots = x.shape[0]
    y = np.zeros((n_slots, ch.n_ue), dtype=np.complex128)
    for tau in range(min(ch.n_taps, n_slots)):
        y[tau:] += x[: n_slots - tau] @ ch.taps[tau].T
    if noise is not None and noise.variance > 0:
        y += complex_normal(as_generator(noise.seed), y.shape, noise.variance)
    return y


def save_taps(path, channels: list[TapChannel] | TapChannel) -> None:
    """Write one or more tap channels as a self-describing text file.

    Layout: a magic comment line, a header line ``K N L R``, then one
    ``real imag`` line per coefficient in row-major ``[r, tau, k, n]`` order.
    """
    if isinstance(channels, TapChannel):
        channels = [channels]
    shapes = {c.taps.shape for c in channels}
    if len(shapes) != 1:
        raise ValueError("all channels in a tap file must share (L, K, N)")
    n_taps, n_ue, n_tx = shapes.pop()
    data = np.stack([c.taps for c in channels]).reshape(-1)
    header = f"{TAP_FILE_MAGIC}\n{n_ue} {n_tx} {n_taps} {len(channels)}"
    np.savetxt(path, np.column_stack([data.real, data.imag]), header=header, comments="", fmt="%.17g")


def load_taps(path) -> list[TapChannel]:
    path = Path(path)
    with path.open() as fh:
        magic = fh.readline().strip()
        if magic != TAP_FILE_MAGIC:
            raise ValueError(f"{path}: not a tap file (missing '{TAP_FILE_MAGIC}')")
        try:
            n_ue, n_tx, n_taps, count = (int(v) for v in fh.readline().split())
        except ValueError:
            raise ValueError(f"{path}: malformed header, expected 'K N L R'") from None
        body = np.loadtxt(fh, ndmin=2)
    if body.shape != (count * n_taps * n_ue * n_tx, 2):
        raise ValueError(f"{path}: expected {count * n_taps * n_ue * n_tx} coefficients, got {body.shape[0]}")
    taps = (body[:, 0] + 1j * body[:, 1]).reshape(count, n_taps, n_ue, n_tx)
    return [TapChannel(t) for t in taps]


def file_tap_generator(path) -> Callable[..., TapChannel]:
    """Tap generator that cycles through the realizations stored in ``path``.

    The ``seed`` argument must be a nonnegative block index.
    """
    realizations = load_taps(path)

    def generate(n_tx: int, n_ue: int, n_taps: int, seed) -> TapChannel:
        ch = realizations[int(seed) % len(realizations)]
        if (ch.n_tx, ch.n_ue) != (n_tx, n_ue) or ch.n_taps > n_taps:
            raise ValueError(
                f"tap file holds K={ch.n_ue}, N={ch.n_tx}, L={ch.n_taps}; "
                f"config expects K={n_ue}, N={n_tx}, L<={n_taps}"
            )
        return ch

    return generate

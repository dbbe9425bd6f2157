"""GMI with a Gaussian auxiliary channel ``q(y|x) = CN(y; h x, sigma_q^2)``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from ..ofdm import Constellation

NOISE_FLOOR = 1e-12


class DegeneratePilotsError(ValueError):
    pass


@dataclass(frozen=True)
class AuxChannelParams:
    gain: complex
    noise_var: float
    exponent: float = 1.0

    def __post_init__(self):
        if self.exponent <= 0:
            raise ValueError("exponent s must be positive")
        object.__setattr__(self, "noise_var", max(float(self.noise_var), NOISE_FLOOR))


def _mask(pilot_set, size: int) -> np.ndarray:
    """Boolean pilot mask from None / index array / boolean array."""
    if pilot_set is None:
        return np.zeros(size, dtype=bool)
    p = np.asarray(pilot_set)
    if p.dtype == bool:
        if p.shape != (size,):
            raise ValueError(f"pilot mask must have length {size}")
        return p
    mask = np.zeros(size, dtype=bool)
    mask[p.astype(int)] = True
    return mask


def estimate_params(tx: np.ndarray, rx: np.ndarray, pilot_set=None) -> AuxChannelParams:
    """Joint ML estimate of ``(h, sigma_q^2)`` over the pilot positions.

    ``pilot_set=None`` uses every symbol (data-aided estimation).
    """
    tx = np.asarray(tx).ravel()
    rx = np.asarray(rx).ravel()
    if pilot_set is None:
        xs, ys = tx, rx
    else:
        m = _mask(pilot_set, tx.size)
        if not m.any():
            raise DegeneratePilotsError("pilot set is empty")
        xs, ys = tx[m], rx[m]
    energy = float(np.sum(np.abs(xs) ** 2))
    if energy == 0:
        raise DegeneratePilotsError("pilot symbols carry zero energy")
    h = complex(np.sum(ys * np.conj(xs)) / energy)
    noise = float(np.mean(np.abs(ys - h * xs) ** 2))
    return AuxChannelParams(h, noise)


def gmi_terms(tx: np.ndarray, rx: np.ndarray, params: AuxChannelParams, const: Constellation,
              s: float | None = None) -> np.ndarray:
    """Per-symbol ``log2(q(y|x)^s / sum_a P(a) q(y|a)^s)`` with uniform P(a)."""
    s = params.exponent if s is None else s
    tx = np.asarray(tx).ravel()
    rx = np.asarray(rx).ravel()
    scale = s / params.noise_var
    metric_tx = -scale * np.abs(rx - params.gain * tx) ** 2
    metric_all = -scale * np.abs(rx[:, None] - params.gain * const.points[None, :]) ** 2
    log_mix = logsumexp(metric_all, axis=1) - np.log(const.size)
    return (metric_tx - log_mix) / np.log(2.0)


def gmi_rate(tx: np.ndarray, rx: np.ndarray, params: AuxChannelParams, const: Constellation,
             pilot_set=None, s: float | None = None) -> float:
    """Rate in bpcu: sum over non-pilot symbols, normalized by the full count S."""
    terms = gmi_terms(tx, rx, params, const, s)
    keep = ~_mask(pilot_set, terms.size)
    return float(np.sum(terms[keep]) / terms.size)


def optimize_s(tx, rx, params: AuxChannelParams, const: Constellation, pilot_set=None,
               grid=None) -> tuple[float, float]:
    """Grid search of the GMI exponent; returns ``(s*, rate*)`` (first maximizer on ties)."""
    grid = np.linspace(0.25, 4.0, 76) if grid is None else np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("grid must be nonempty")
    rates = np.array([gmi_rate(tx, rx, params, const, pilot_set, s) for s in grid])
    best = int(np.argmax(rates))
    return float(grid[best]), float(rates[best])

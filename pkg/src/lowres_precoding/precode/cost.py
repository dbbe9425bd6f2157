"""Time-domain MSE cost and its closed-form receive scaling."""

from __future__ import annotations

import numpy as np

from ..channel import TapChannel, apply_channel


class DegenerateInputError(ValueError):
    """The optimal scaling is undefined (zero transmit signal and zero noise)."""


def cost_g(x: np.ndarray, alpha: float, ch: TapChannel, target: np.ndarray, noise_var: float) -> float:
    """``sum_t ||u[t] - alpha * sum_tau H[tau] x[t - tau]||^2 + alpha^2 T K sigma^2``."""
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    target = np.asarray(target)
    hx = apply_channel(ch, x)
    if hx.shape != target.shape:
        raise ValueError(f"target shape {target.shape} does not match channel output {hx.shape}")
    n_slots, n_ue = target.shape
    resid = target - alpha * hx
    return float(np.sum(resid.real**2 + resid.imag**2) + alpha**2 * n_slots * n_ue * noise_var)


def alpha_from_products(corr: float, energy: float, n_slots: int, n_ue: int, noise_var: float) -> float:
    denom = energy + n_slots * n_ue * noise_var
    if denom <= 0:
        raise DegenerateInputError("all-zero transmit signal with zero noise: alpha is undefined")
    return max(corr, 0.0) / denom


def optimal_alpha(x: np.ndarray, ch: TapChannel, target: np.ndarray, noise_var: float) -> float:
    """Minimizer of the cost over alpha >= 0 for a fixed transmit sequence."""
    target = np.asarray(target)
    hx = apply_channel(ch, x)
    corr = float(np.sum((np.conj(target) * hx).real))
    energy = float(np.sum(np.abs(hx) ** 2))
    return alpha_from_products(corr, energy, *target.shape, noise_var)

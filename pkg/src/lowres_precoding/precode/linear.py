"""Linear ZF / MMSE precoding per subcarrier."""

from __future__ import annotations

import numpy as np

from ..channel import FreqChannel, TapChannel
from ..ofdm import to_time
from .cost import cost_g
from .result import REAL_MULTS_PER_COMPLEX, PrecodeResult


class ZFInfeasibleError(np.linalg.LinAlgError):
    """Zero-forcing requested on a rank-deficient subcarrier channel."""


def lmmse_weights(freq_ch: FreqChannel, symbol_power, noise_var: float, rcond: float = 1e-12) -> np.ndarray:
    """``W[m] = P[m] H[m]^H (P[m] H[m] H[m]^H + sigma^2 I)^-1`` for every subcarrier.

    Returns an array of shape (T_F, N, K).  ``noise_var = 0`` gives the
    zero-forcing pseudo-inverse and raises :class:`ZFInfeasibleError` when some
    ``H[m]`` is not of full row rank.
    """
    h = freq_ch.per_subcarrier
    n_sub, n_ue, _ = h.shape
    p = np.broadcast_to(np.asarray(symbol_power, dtype=float), (n_sub,))
    hh = np.conj(np.swapaxes(h, 1, 2))
    gram = p[:, None, None] * (h @ hh) + noise_var * np.eye(n_ue)
    if noise_var == 0:
        sv = np.linalg.svd(gram, compute_uv=False)
        if np.any(sv[:, -1] <= rcond * sv[:, 0]):
            bad = int(np.argmax(sv[:, -1] <= rcond * sv[:, 0]))
            raise ZFInfeasibleError(f"zero-forcing infeasible: subcarrier {bad} channel is rank deficient")
    # W = P H^H G^-1  <=>  W^H = P G^-H H  (G is Hermitian)
    wh = np.linalg.solve(gram, p[:, None, None] * h)
    return np.conj(np.swapaxes(wh, 1, 2))


def linear_mult_count(t_f: int, n_tx: int, n_ue: int) -> int:
    """Real multiplications for weights + per-subcarrier precoding + N IDFTs."""
    per_sub = n_ue * n_ue * n_tx + n_ue**3 + n_tx * n_ue * n_ue + n_tx * n_ue
    ifft = n_tx * t_f * max(int(np.ceil(np.log2(t_f))), 1)
    return REAL_MULTS_PER_COMPLEX * (t_f * per_sub + ifft)


def linear_precode(
    freq_data: np.ndarray,
    weights: np.ndarray,
    t_c: int,
    power: float = 1.0,
    channel: TapChannel | None = None,
    noise_var: float = 0.0,
) -> PrecodeResult:
    """Precode every subcarrier, IDFT per antenna, prefix, and normalize.

    The output is scaled by ``beta`` so the block-average energy
    ``mean_t ||x[t]||^2`` equals ``power``; ``alpha = 1 / beta`` undoes that
    scaling at the receiver.  The cost is filled in when ``channel`` is given.
    """
    freq_data = np.asarray(freq_data)
    if weights.shape[0] != freq_data.shape[0] or weights.shape[2] != freq_data.shape[1]:
        raise ValueError(f"weights {weights.shape} incompatible with data {freq_data.shape}")
    x_freq = np.einsum("mnk,mk->mn", weights, freq_data)
    x = to_time(x_freq, t_c)
    energy = np.mean(np.sum(np.abs(x) ** 2, axis=1))
    if energy <= 0:
        beta, alpha = 1.0, 0.0
    else:
        beta = np.sqrt(power / energy)
        alpha = 1.0 / beta
    x = beta * x
    cost = float("nan")
    if channel is not None:
        cost = cost_g(x, alpha, channel, to_time(freq_data, t_c), noise_var)
    t_f, n_tx, n_ue = weights.shape
    return PrecodeResult(x=x, alpha=float(alpha), cost=cost, iterations=1,
                         op_count=linear_mult_count(t_f, n_tx, n_ue))

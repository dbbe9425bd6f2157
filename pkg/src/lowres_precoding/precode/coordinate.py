"""MAGIQ and QCM: alternating minimization of the time-domain MSE cost.

For fixed alpha the transmit block is improved one antenna symbol at a time
(greedy antenna choice for MAGIQ, a fixed schedule for QCM); after each full
pass over the block alpha is re-set to its closed-form optimum.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..channel import TapChannel, apply_channel, frequency_response
from ..ofdm import OfdmFrame, from_time, to_time
from ..rng import as_generator
from . import _kernels
from .alphabet import TxAlphabet, quantize
from .cost import alpha_from_products
from .result import REAL_MULTS_PER_COMPLEX, PrecodeResult

SCHEDULES = ("round-robin", "random-permutation")

# trace_kind codes
SYMBOL_UPDATE = 0
ALPHA_UPDATE = 1


def _unpack_target(target, t_c: int | None):
    if isinstance(target, OfdmFrame):
        return target.time, target.t_c
    u = np.asarray(target, dtype=np.complex128)
    if u.ndim != 2:
        raise ValueError(f"target must have shape (T, K), got {u.shape}")
    return u, (0 if t_c is None else t_c)


@dataclass
class CoordinateState:
    """Mutable search state with cached channel output and residuals."""

    target: np.ndarray
    channel: TapChannel
    alphabet: TxAlphabet
    noise_var: float
    x: np.ndarray
    hx: np.ndarray
    resid: np.ndarray
    alpha: float
    cost: float
    cols: np.ndarray
    cum_energy: np.ndarray
    ops: int = 0

    @classmethod
    def create(cls, target, channel: TapChannel, alphabet: TxAlphabet, noise_var: float,
               x_init: np.ndarray, alpha: float | None = None) -> "CoordinateState":
        u, _ = _unpack_target(target, None)
        x = np.array(x_init, dtype=np.complex128, copy=True)
        if x.shape != (u.shape[0], channel.n_tx):
            raise ValueError(f"x_init must have shape {(u.shape[0], channel.n_tx)}, got {x.shape}")
        if u.shape[1] != channel.n_ue:
            raise ValueError(f"target has {u.shape[1]} UEs, channel has {channel.n_ue}")
        cols = np.ascontiguousarray(np.transpose(channel.taps, (2, 0, 1)))
        col_energy = np.sum(np.abs(cols) ** 2, axis=2)
        cum_energy = np.concatenate([np.zeros((channel.n_tx, 1)), np.cumsum(col_energy, axis=1)], axis=1)
        state = cls(u, channel, alphabet, float(noise_var), x, np.empty_like(u), np.empty_like(u),
                    0.0, 0.0, cols, np.ascontiguousarray(cum_energy))
        state.hx = apply_channel(channel, x)
        state.alpha = state.best_alpha() if alpha is None else float(alpha)
        state.refresh()
        return state

    @property
    def n_slots(self) -> int:
        return self.target.shape[0]

    def best_alpha(self) -> float:
        corr = float(np.sum((np.conj(self.target) * self.hx).real))
        energy = float(np.sum(self.hx.real**2 + self.hx.imag**2))
        return alpha_from_products(corr, energy, *self.target.shape, self.noise_var)

    def refresh(self) -> None:
        """Recompute residuals and cost from ``hx`` and ``alpha``."""
        self.resid = np.ascontiguousarray(self.target - self.alpha * self.hx)
        n_slots, n_ue = self.target.shape
        self.cost = float(np.sum(self.resid.real**2 + self.resid.imag**2)
                          + self.alpha**2 * n_slots * n_ue * self.noise_var)

    def update_alpha(self) -> float:
        self.alpha = self.best_alpha()
        self.refresh()
        return self.alpha

    def coordinate_update(self, t: int, n: int) -> tuple[complex, float]:
        """Move ``x[t, n]`` to its best alphabet point for the current alpha."""
        i, delta, ops = _kernels.best_move(self.x, self.resid, self.cols, self.cum_energy,
                                           self.alphabet.points, self.alpha, t, n)
        self.ops += ops
        if i >= 0:
            self.ops += _kernels.apply_move(self.x, self.hx, self.resid, self.cols, self.alpha,
                                            t, n, self.alphabet.points[i])
            self.cost += delta
        return complex(self.x[t, n]), self.cost


def coordinate_update(state: CoordinateState, t: int, n: int) -> tuple[complex, float]:
    return state.coordinate_update(t, n)


def matched_filter_init(target, ch: TapChannel, alphabet: TxAlphabet, t_c: int | None = None) -> np.ndarray:
    """Quantized transmit matched filter ``H[m]^H u[m]``, brought to the time domain.

    The unquantized filter output is scaled to block-average energy P before
    quantization so the zero symbol is only chosen for weak entries.
    """
    if isinstance(target, OfdmFrame):
        freq, t_c = target.freq, target.t_c
    else:
        u, t_c = _unpack_target(target, t_c)
        freq = from_time(u, u.shape[0] - t_c, t_c)
    h = frequency_response(ch, freq.shape[0]).per_subcarrier
    x_freq = np.einsum("mkn,mk->mn", np.conj(h), freq)
    x = to_time(x_freq, t_c)
    energy = np.mean(np.sum(np.abs(x) ** 2, axis=1))
    if energy > 0:
        x *= np.sqrt(alphabet.power_budget / energy)
    return quantize(x, alphabet)


def _mf_mult_count(t_f: int, n_tx: int, n_ue: int) -> int:
    return REAL_MULTS_PER_COMPLEX * (n_ue * n_tx * t_f + n_tx * t_f * max(int(np.ceil(np.log2(t_f))), 1))


def _descend(state: CoordinateState, iterations: int, greedy: bool, schedule: str, rng,
             record_trace: bool, callback: Callable[[CoordinateState], None] | None,
             callback_every: int | None) -> tuple[np.ndarray | None, np.ndarray | None]:
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    n_slots, n_tx = state.x.shape
    per_pass = n_slots * n_tx
    active = np.ones(n_tx, dtype=np.bool_)
    points = state.alphabet.points
    traces, kinds = [], []
    done = 0
    for _ in range(iterations):
        if greedy or schedule == "round-robin":
            order = np.broadcast_to(np.arange(n_tx), (n_slots, n_tx)).copy()
        else:
            order = np.argsort(rng.random((n_slots, n_tx)), axis=1)
        j = 0
        while j < per_pass:
            stop = per_pass
            if callback is not None and callback_every:
                stop = min(per_pass, j + callback_every - done % callback_every)
            buf = np.empty(stop - j if record_trace else 0)
            state.cost, ops = _kernels.sweep(state.x, state.hx, state.resid, state.cols, state.cum_energy,
                                             points, state.alpha, state.cost, order, active, greedy,
                                             j, stop, buf)
            state.ops += ops
            done += stop - j
            j = stop
            if record_trace:
                traces.append(buf)
                kinds.append(np.full(buf.size, SYMBOL_UPDATE, dtype=np.int8))
            if callback is not None and (not callback_every or done % callback_every == 0):
                callback(state)
        state.update_alpha()
        if record_trace:
            traces.append(np.array([state.cost]))
            kinds.append(np.array([ALPHA_UPDATE], dtype=np.int8))
    if not record_trace:
        return None, None
    return np.concatenate(traces), np.concatenate(kinds)


def _precode(target, channel, alphabet, iterations, noise_var, *, greedy, schedule, seed, t_c,
             x_init, record_trace, callback, callback_every) -> PrecodeResult:
    if schedule not in SCHEDULES:
        raise ValueError(f"schedule must be one of {SCHEDULES}, got {schedule!r}")
    u, t_c = _unpack_target(target, t_c)
    pre_ops = 0
    if x_init is None:
        frame = target if isinstance(target, OfdmFrame) else None
        x_init = matched_filter_init(frame if frame is not None else u, channel, alphabet, t_c)
        pre_ops = _mf_mult_count(u.shape[0] - t_c, channel.n_tx, channel.n_ue)
    state = CoordinateState.create(u, channel, alphabet, noise_var, x_init)
    start_cost = state.cost
    trace, kinds = _descend(state, iterations, greedy, schedule, as_generator(seed),
                            record_trace, callback, callback_every)
    if record_trace:
        trace = np.concatenate([[start_cost], trace])
        kinds = np.concatenate([[ALPHA_UPDATE], kinds]).astype(np.int8)
    return PrecodeResult(x=state.x, alpha=state.alpha, cost=state.cost, iterations=iterations,
                         op_count=REAL_MULTS_PER_COMPLEX * state.ops, preprocessing_ops=pre_ops,
                         trace=trace, trace_kind=kinds)


def precode_magiq(target, channel: TapChannel, alphabet: TxAlphabet, iterations: int, noise_var: float,
                  *, t_c: int | None = None, x_init: np.ndarray | None = None, record_trace: bool = False,
                  callback=None, callback_every: int | None = None) -> PrecodeResult:
    """MAGIQ: per time slot, greedily pick antenna and symbol jointly until all antennas are used.

    ``target`` is an :class:`OfdmFrame` or a (T, K) array (then ``t_c``
    locates its prefix for the matched-filter start).  ``callback(state)``
    fires after every ``callback_every`` symbol updates.
    """
    return _precode(target, channel, alphabet, iterations, noise_var, greedy=True,
                    schedule="round-robin", seed=None, t_c=t_c, x_init=x_init,
                    record_trace=record_trace, callback=callback, callback_every=callback_every)


def precode_qcm(target, channel: TapChannel, alphabet: TxAlphabet, iterations: int, noise_var: float,
                schedule: str = "round-robin", seed=None, *, t_c: int | None = None,
                x_init: np.ndarray | None = None, record_trace: bool = False,
                callback=None, callback_every: int | None = None) -> PrecodeResult:
    """QCM: like MAGIQ but antennas are visited in a fixed order per slot.

    ``schedule`` is ``"round-robin"`` (ascending antenna index) or
    ``"random-permutation"`` (fresh permutation per slot drawn from ``seed``).
    """
    return _precode(target, channel, alphabet, iterations, noise_var, greedy=False,
                    schedule=schedule, seed=seed, t_c=t_c, x_init=x_init,
                    record_trace=record_trace, callback=callback, callback_every=callback_every)

"""End-to-end Monte-Carlo rate evaluation.

A block is one channel realization held for ``S / T_F`` OFDM symbols:
draw channel, corrupt the transmitter's copy, then per OFDM symbol draw
data, precode, pass through the true channel with noise, and DFT.  Each
UE then estimates its auxiliary channel and evaluates the GMI over the
block's ``S`` symbols.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..channel import NoiseSpec, apply_channel, corrupt_csi, draw_rayleigh, file_tap_generator
from ..ofdm import OfdmFrame, constellation, draw_data, from_time
from ..precode.alphabet import TxAlphabet
from ..precode.cost import optimal_alpha
from ..precode.registry import Precoder, linear_family, parse_precoder
from ..rng import block_streams
from .gmi import estimate_params, gmi_rate

MODES = ("data-aided", "pat")


class BlockError(RuntimeError):
    def __init__(self, block: int, cause: BaseException):
        self.block = block
        super().__init__(f"block {block}: {type(cause).__name__}: {cause}")


@dataclass
class BlockTrace:
    """Transmitted and received frequency-domain symbols of one block, (S, K) each."""

    block: int
    tx: np.ndarray
    rx: np.ndarray
    pilots: np.ndarray
    alpha: float
    ops_per_iteration: float
    iterations: int
    alpha_wf: float = float("nan")


@dataclass
class GmiReport:
    per_ue_rates: np.ndarray
    mean_rate: float
    blocks: int
    pilot_fraction: float
    mode: str
    raw_block_rates: np.ndarray = field(repr=False)
    alpha_mean: float = float("nan")
    alpha_wf_mean: float = float("nan")
    ops_per_iteration: float = 0.0
    iterations: int = 1


@lru_cache(maxsize=8)
def _file_generator(path: str):
    return file_tap_generator(path)


def noise_variance(power: float, snr_db: float) -> float:
    return power * 10.0 ** (-snr_db / 10.0)


def simulate_block(config, precoder: Precoder, snr_db: float, block: int, *, epsilon: float = 0.0,
                   seed: int | None = None, with_wiener: bool = False) -> BlockTrace:
    seed = config.master_seed if seed is None else seed
    streams = block_streams(seed, block)
    if config.tap_file is not None:
        ch = _file_generator(config.tap_file)(config.n_tx, config.n_ue, config.n_taps, block)
    else:
        ch = draw_rayleigh(config.n_tx, config.n_ue, config.n_taps, streams["channel"])
    est = corrupt_csi(ch, epsilon, streams["csi"])
    const = constellation(config.constellation)
    alphabet = TxAlphabet(config.power, config.n_tx, config.phase_bits)
    noise_var = noise_variance(config.power, snr_db)

    tx, rx, alphas, ops, wf = [], [], [], [], []
    for _ in range(config.symbols_per_block):
        frame = OfdmFrame.from_freq(draw_data(const, config.n_ue, config.t_f, streams["data"]), config.t_c)
        res = precoder(frame, est, alphabet, noise_var, streams["schedule"])
        y = apply_channel(ch, res.x, NoiseSpec(noise_var, streams["noise"]))
        tx.append(frame.freq)
        rx.append(from_time(y, config.t_f, config.t_c))
        alphas.append(res.alpha)
        ops.append(res.ops_per_iteration)
        if with_wiener:
            lin = linear_family("lp-mmse", frame, est, alphabet, noise_var)
            wf.append(optimal_alpha(lin.x, ch, frame.time, noise_var))

    n_sym = config.coherence
    n_pilots = max(1, int(round(config.pilot_fraction * n_sym)))
    pilots = np.zeros(n_sym, dtype=bool)
    pilots[streams["pilots"].choice(n_sym, size=n_pilots, replace=False)] = True
    return BlockTrace(block, np.concatenate(tx), np.concatenate(rx), pilots, float(np.mean(alphas)),
                      float(np.mean(ops)), precoder.iterations,
                      float(np.mean(wf)) if wf else float("nan"))


def _simulate_guarded(args):
    config, precoder, snr_db, block, epsilon, seed, with_wiener = args
    try:
        return simulate_block(config, precoder, snr_db, block, epsilon=epsilon, seed=seed,
                              with_wiener=with_wiener)
    except Exception as e:  # noqa: BLE001 - re-raised with the block index attached
        raise BlockError(block, e) from e


def simulate_blocks(config, precoder: Precoder, snr_db: float, blocks: int, *, epsilon: float = 0.0,
                    seed: int | None = None, workers: int = 1, with_wiener: bool = False) -> list[BlockTrace]:
    """Simulate blocks ``0 .. blocks - 1``; the result is ordered by block index."""
    jobs = [(config, precoder, snr_db, b, epsilon, seed, with_wiener) for b in range(blocks)]
    if workers <= 1:
        return [_simulate_guarded(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_simulate_guarded, jobs, chunksize=max(1, blocks // (4 * workers))))


def block_rates(trace: BlockTrace, const, mode: str) -> np.ndarray:
    """Raw per-UE GMI of one block."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    pilots = trace.pilots if mode == "pat" else None
    rates = np.empty(trace.tx.shape[1])
    for k in range(trace.tx.shape[1]):
        params = estimate_params(trace.tx[:, k], trace.rx[:, k], pilots)
        rates[k] = gmi_rate(trace.tx[:, k], trace.rx[:, k], params, const, pilots)
    return rates


def report_from_traces(traces: list[BlockTrace], const, mode: str, pilot_fraction: float) -> GmiReport:
    raw = np.array([block_rates(t, const, mode) for t in traces])
    per_ue = np.mean(np.maximum(raw, 0.0), axis=0)
    return GmiReport(
        per_ue_rates=per_ue,
        mean_rate=float(np.mean(per_ue)),
        blocks=len(traces),
        pilot_fraction=pilot_fraction if mode == "pat" else 0.0,
        mode=mode,
        raw_block_rates=raw,
        alpha_mean=float(np.mean([t.alpha for t in traces])),
        alpha_wf_mean=float(np.mean([t.alpha_wf for t in traces])),
        ops_per_iteration=float(np.mean([t.ops_per_iteration for t in traces])),
        iterations=traces[0].iterations if traces else 1,
    )


def evaluate_system(config, precoder: Precoder | str, snr_db: float, blocks: int | None = None,
                    mode: str | None = None, seed: int | None = None, *, epsilon: float | None = None,
                    workers: int = 1, with_wiener: bool = False) -> GmiReport:
    """Average GMI of ``precoder`` at ``snr_db`` over ``blocks`` independent blocks.

    Unset arguments fall back to the config (first epsilon of its grid).
    """
    if isinstance(precoder, str):
        precoder = parse_precoder(precoder, config.schedule)
    blocks = config.blocks if blocks is None else blocks
    mode = config.mode if mode is None else mode
    epsilon = config.epsilon[0] if epsilon is None else epsilon
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    traces = simulate_blocks(config, precoder, snr_db, blocks, epsilon=epsilon, seed=seed,
                             workers=workers, with_wiener=with_wiener)
    return report_from_traces(traces, constellation(config.constellation), mode, config.pilot_fraction)

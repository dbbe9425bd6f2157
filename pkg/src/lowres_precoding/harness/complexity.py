"""Multiplication counts under doubling of T, N, K, and L."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..channel import draw_rayleigh
from ..ofdm import OfdmFrame, constellation, draw_data
from ..precode.alphabet import TxAlphabet
from ..precode.registry import ITERATIVE, parse_precoder
from .config import SystemConfig

DIMENSIONS = ("T", "N", "K", "L")


@dataclass
class ComplexityRow:
    precoder: str
    dimension: str
    base_value: int
    doubled_value: int
    base_mults: float
    doubled_mults: float
    model_ratio: float

    @property
    def ratio(self) -> float:
        return self.doubled_mults / self.base_mults

    @property
    def exponent(self) -> float:
        return float(np.log2(self.ratio))


def order_estimate(name: str, n_tx: int, n_ue: int, n_slots: int, n_taps: int, alphabet_size: int) -> float:
    """Leading-order multiplications per iteration."""
    if name in ITERATIVE:
        return n_ue * n_tx * n_slots * n_taps + n_ue * n_tx * n_taps * alphabet_size
    return n_slots * n_ue**3 + n_slots * n_ue**2 * n_tx


def measure(spec: str, n_tx: int, n_ue: int, t_f: int, t_c: int, n_taps: int, *, const: str = "16qam",
            phase_bits: int = 2, snr_db: float = 12.0, trials: int = 3, seed: int = 0) -> float:
    """Mean real multiplications per iteration over ``trials`` random instances."""
    precoder = parse_precoder(spec)
    alphabet = TxAlphabet(1.0, n_tx, phase_bits)
    noise_var = 10 ** (-snr_db / 10)
    rng = np.random.default_rng(seed)
    counts = []
    for _ in range(trials):
        ch = draw_rayleigh(n_tx, n_ue, n_taps, rng)
        frame = OfdmFrame.from_freq(draw_data(constellation(const), n_ue, t_f, rng), t_c)
        counts.append(precoder(frame, ch, alphabet, noise_var, rng).ops_per_iteration)
    return float(np.mean(counts))


def report_complexity(config: SystemConfig, precoders=None, *, trials: int = 3, seed: int = 0,
                      out: str | Path | None = None) -> list[ComplexityRow]:
    """Double each of T, N, K, L in turn and compare measured counts.

    The base point keeps the config's N, K, T_F, L but widens the prefix to
    ``2L - 1`` so that L can be doubled at fixed T.
    """
    precoders = list(config.precoders if precoders is None else precoders)
    base = dict(n_tx=config.n_tx, n_ue=config.n_ue, t_f=max(config.t_f, 2 * config.n_taps),
                t_c=max(config.t_c, 2 * config.n_taps - 1), n_taps=config.n_taps)
    size = 2**config.phase_bits + 1
    rows = []
    for spec in precoders:
        name = parse_precoder(spec).name
        kw = dict(const=config.constellation, phase_bits=config.phase_bits, trials=trials, seed=seed)
        base_count = measure(spec, **base, **kw)
        for dim in DIMENSIONS:
            dbl = dict(base)
            if dim == "T":
                dbl["t_f"], dbl["t_c"] = 2 * base["t_f"], 2 * base["t_c"]
            elif dim == "N":
                dbl["n_tx"] *= 2
            elif dim == "K":
                dbl["n_ue"] *= 2
            else:
                dbl["n_taps"] *= 2
            key = {"T": None, "N": "n_tx", "K": "n_ue", "L": "n_taps"}[dim]
            b_val = base["t_f"] + base["t_c"] if key is None else base[key]
            d_val = dbl["t_f"] + dbl["t_c"] if key is None else dbl[key]
            model = (order_estimate(name, dbl["n_tx"], dbl["n_ue"], dbl["t_f"] + dbl["t_c"], dbl["n_taps"], size)
                     / order_estimate(name, base["n_tx"], base["n_ue"], base["t_f"] + base["t_c"],
                                      base["n_taps"], size))
            rows.append(ComplexityRow(parse_precoder(spec).label, dim, b_val, d_val, base_count,
                                      measure(spec, **dbl, **kw), model))
    if out is not None:
        with Path(out).open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["precoder", "dimension", "base_value", "doubled_value", "base_mults_per_iter",
                        "doubled_mults_per_iter", "ratio", "exponent", "model_ratio"])
            for r in rows:
                w.writerow([r.precoder, r.dimension, r.base_value, r.doubled_value, f"{r.base_mults:.12g}",
                            f"{r.doubled_mults:.12g}", f"{r.ratio:.6g}", f"{r.exponent:.6g}",
                            f"{r.model_ratio:.6g}"])
    return rows

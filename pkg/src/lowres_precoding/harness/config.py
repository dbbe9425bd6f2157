"""System configuration: presets, YAML loading, validation."""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from ..ofdm import constellation
from ..precode.registry import SCHEDULES, parse_precoder

MODES = ("data-aided", "pat")
CHANNEL_MODELS = ("rayleigh",)


class ConfigError(ValueError):
    """Invalid configuration; ``errors`` lists ``(field, message)`` pairs."""

    def __init__(self, errors: list[tuple[str, str]]):
        self.errors = errors
        super().__init__("; ".join(f"{k}: {v}" for k, v in errors))


@dataclass(frozen=True)
class SystemConfig:
    n_tx: int
    n_ue: int
    t_f: int
    t_c: int
    n_taps: int
    constellation: str = "16qam"
    phase_bits: int = 2
    precoders: tuple[str, ...] = ("lp-zf", "qlp-zf", "magiq:4", "qcm:6")
    schedule: str = "round-robin"
    snr_grid: tuple[float, ...] = (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)
    epsilon: tuple[float, ...] = (0.0,)
    blocks: int = 200
    coherence: int | None = None
    pilot_fraction: float = 0.1
    mode: str = "data-aided"
    master_seed: int = 0
    power: float = 1.0
    channel_model: str = "rayleigh"
    tap_file: str | None = None

    def __post_init__(self):
        for name in ("precoders", "snr_grid", "epsilon"):
            val = getattr(self, name)
            if isinstance(val, (str, int, float)):
                val = (val,)
            object.__setattr__(self, name, tuple(val))
        if self.coherence is None:
            object.__setattr__(self, "coherence", self.t_f)
        errors = validate(self)
        if errors:
            raise ConfigError(errors)

    @property
    def n_slots(self) -> int:
        return self.t_f + self.t_c

    @property
    def symbols_per_block(self) -> int:
        return self.coherence // self.t_f

    def replace(self, **changes) -> "SystemConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        for k, v in d.items():
            if isinstance(v, tuple):
                d[k] = list(v)
        return d

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


def validate(cfg: SystemConfig) -> list[tuple[str, str]]:
    errs = []
    for name in ("n_tx", "n_ue", "t_f", "n_taps", "blocks"):
        v = getattr(cfg, name)
        if not isinstance(v, int) or v < 1:
            errs.append((name, f"must be a positive integer, got {v!r}"))
    if not isinstance(cfg.t_c, int) or cfg.t_c < 0:
        errs.append(("t_c", f"must be a nonnegative integer, got {cfg.t_c!r}"))
    if errs:
        return errs
    if cfg.t_f < cfg.n_taps:
        errs.append(("t_f", f"T_F={cfg.t_f} must be >= L={cfg.n_taps}"))
    if cfg.t_c < cfg.n_taps - 1:
        errs.append(("t_c", f"T_c={cfg.t_c} must be >= L-1={cfg.n_taps - 1}"))
    try:
        constellation(cfg.constellation)
    except ValueError as e:
        errs.append(("constellation", str(e)))
    if not isinstance(cfg.phase_bits, int) or cfg.phase_bits < 0:
        errs.append(("phase_bits", f"must be a nonnegative integer, got {cfg.phase_bits!r}"))
    if cfg.schedule not in SCHEDULES:
        errs.append(("schedule", f"must be one of {SCHEDULES}"))
    if not cfg.precoders:
        errs.append(("precoders", "at least one precoder is required"))
    for p in cfg.precoders:
        try:
            parse_precoder(p, cfg.schedule if cfg.schedule in SCHEDULES else "round-robin")
        except ValueError as e:
            errs.append(("precoders", str(e)))
    if not cfg.snr_grid:
        errs.append(("snr_grid", "at least one SNR point is required"))
    for e in cfg.epsilon:
        if not 0.0 <= e <= 1.0:
            errs.append(("epsilon", f"values must lie in [0, 1], got {e}"))
    if not isinstance(cfg.coherence, int) or cfg.coherence < cfg.t_f or cfg.coherence % cfg.t_f:
        errs.append(("coherence", f"S={cfg.coherence} must be a positive multiple of T_F={cfg.t_f}"))
    if not 0.0 < cfg.pilot_fraction < 1.0:
        errs.append(("pilot_fraction", f"must lie in (0, 1), got {cfg.pilot_fraction}"))
    if cfg.mode not in MODES:
        errs.append(("mode", f"must be one of {MODES}, got {cfg.mode!r}"))
    if cfg.power <= 0:
        errs.append(("power", "must be positive"))
    if cfg.channel_model not in CHANNEL_MODELS:
        errs.append(("channel_model", f"must be one of {CHANNEL_MODELS}"))
    if cfg.tap_file is not None and not Path(cfg.tap_file).is_file():
        errs.append(("tap_file", f"no such file: {cfg.tap_file}"))
    return errs


PRESETS: dict[str, dict] = {
    "system-a": dict(n_tx=128, n_ue=16, t_f=256, t_c=14, n_taps=15, constellation="16qam", phase_bits=2,
                     precoders=["lp-zf", "qlp-zf", "magiq:4", "qcm:6"], blocks=200),
    "system-a-64qam": dict(n_tx=128, n_ue=16, t_f=256, t_c=14, n_taps=15, constellation="64qam",
                           phase_bits=3, precoders=["lp-zf", "magiq:5", "qcm:3"], blocks=200),
    "system-b": dict(n_tx=64, n_ue=8, t_f=32, t_c=3, n_taps=4, constellation="qpsk", phase_bits=2,
                     precoders=["lp-zf", "qlp-zf", "qcm:6"], blocks=200),
    "system-c-rayleigh": dict(n_tx=80, n_ue=8, t_f=256, t_c=21, n_taps=22, constellation="16qam",
                              phase_bits=2, precoders=["lp-zf", "magiq:4", "qcm:6"], blocks=200),
    "system-a-mini": dict(n_tx=32, n_ue=4, t_f=64, t_c=7, n_taps=8, constellation="16qam", phase_bits=2,
                          precoders=["lp-zf", "qlp-zf", "magiq:4", "qcm:6"], blocks=50),
}

FIELDS = {f.name for f in dataclasses.fields(SystemConfig)}


def from_mapping(data: dict) -> SystemConfig:
    """Build a config from a flat mapping; an optional ``preset`` key supplies defaults."""
    data = dict(data)
    unknown = sorted(set(data) - FIELDS - {"preset"})
    if unknown:
        raise ConfigError([(k, "unknown key") for k in unknown])
    preset = data.pop("preset", None)
    merged = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError([("preset", f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")])
        merged.update(PRESETS[preset])
    merged.update(data)
    missing = [f for f in ("n_tx", "n_ue", "t_f", "t_c", "n_taps") if f not in merged]
    if missing:
        raise ConfigError([(k, "required") for k in missing])
    try:
        return SystemConfig(**merged)
    except TypeError as e:
        raise ConfigError([("config", str(e))]) from None


def preset(name: str, **overrides) -> SystemConfig:
    return from_mapping({"preset": name, **overrides})


def load_config(path) -> SystemConfig:
    """Read a flat YAML mapping (see README for the schema)."""
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text())
    except yaml.YAMLError as e:
        raise ConfigError([("file", f"{path}: {e}")]) from None
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError([("file", f"{path}: top level must be a mapping")])
    nested = [k for k, v in data.items() if isinstance(v, dict)]
    if nested:
        raise ConfigError([(k, "nested mappings are not allowed") for k in nested])
    return from_mapping(data)

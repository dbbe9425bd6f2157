from .complexity import ComplexityRow, measure, report_complexity
from .config import PRESETS, ConfigError, SystemConfig, from_mapping, load_config, preset
from .sweep import AlphaRow, SweepRow, emit_alpha_diagnostics, run_point, run_sweep, write_rows

__all__ = [
    "PRESETS",
    "AlphaRow",
    "ComplexityRow",
    "ConfigError",
    "SweepRow",
    "SystemConfig",
    "emit_alpha_diagnostics",
    "from_mapping",
    "load_config",
    "measure",
    "preset",
    "report_complexity",
    "run_point",
    "run_sweep",
    "write_rows",
]

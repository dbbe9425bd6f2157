"""Command-line entry point: ``lowres-precoding {sweep,complexity,alpha,validate-config}``."""

from __future__ import annotations

import argparse
import logging
import sys

import yaml

from .complexity import report_complexity
from .config import PRESETS, ConfigError, SystemConfig, from_mapping, load_config
from .sweep import emit_alpha_diagnostics, run_sweep

log = logging.getLogger("lowres_precoding")


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--config", metavar="PATH", help="flat YAML config file")
    src.add_argument("--preset", metavar="NAME", choices=sorted(PRESETS), help="named system preset")
    common.add_argument("--seed", type=int, metavar="U64", help="override master_seed")
    common.add_argument("--workers", type=int, default=1, metavar="N", help="parallel block workers")
    common.add_argument("--out", metavar="PATH", help="CSV output path")
    common.add_argument("--mode", choices=["pat", "data-aided"], help="receiver parameter estimation")
    common.add_argument("--blocks", type=int, help="override the number of Monte-Carlo blocks")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="lowres-precoding",
                                 description="Low-resolution MISO-OFDM precoding link simulator")
    sub = ap.add_subparsers(dest="command", required=True)
    sw = sub.add_parser("sweep", parents=[common], help="GMI vs SNR (and epsilon) sweep")
    sw.add_argument("--timing", action="store_true", help="record wall time per row")
    cx = sub.add_parser("complexity", parents=[common], help="multiplication counts under doubling")
    cx.add_argument("--trials", type=int, default=3)
    sub.add_parser("alpha", parents=[common], help="converged alpha vs. Wiener-filter alpha")
    sub.add_parser("validate-config", parents=[common], help="print the resolved config")
    return ap


def _resolve(args) -> SystemConfig:
    if args.config:
        cfg = load_config(args.config)
    elif args.preset:
        cfg = from_mapping({"preset": args.preset})
    else:
        raise ConfigError([("config", "pass --config PATH or --preset NAME")])
    overrides = {}
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.mode is not None:
        overrides["mode"] = args.mode
    if args.blocks is not None:
        overrides["blocks"] = args.blocks
    return cfg.replace(**overrides) if overrides else cfg


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _resolve(args)
    except ConfigError as e:
        for name, msg in e.errors:
            print(f"config error: {name}: {msg}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2

    try:
        if args.command == "validate-config":
            print(yaml.safe_dump(cfg.to_dict(), sort_keys=False), end="")
        elif args.command == "sweep":
            rows = run_sweep(cfg, args.out, workers=args.workers, timing=args.timing)
            failed = [r for r in rows if r.error]
            for r in rows:
                print(f"{r.precoder:>10s} eps={r.epsilon:<5g} snr={r.snr_db:>6g} dB  "
                      f"rate={r.mean_rate_bpcu:.4f} bpcu  alpha={r.alpha_mean:.4g}  {r.error}")
            if failed:
                print(f"{len(failed)} of {len(rows)} points failed", file=sys.stderr)
                return 1
        elif args.command == "complexity":
            for r in report_complexity(cfg, trials=args.trials, out=args.out):
                print(f"{r.precoder:>10s} x2 {r.dimension}: {r.base_mults:.4g} -> {r.doubled_mults:.4g} "
                      f"ratio={r.ratio:.3f} (order estimate {r.model_ratio:.3f})")
        elif args.command == "alpha":
            for r in emit_alpha_diagnostics(cfg, args.out, workers=args.workers):
                print(f"snr={r.snr_db:>6g} dB  alpha={r.alpha_precoder:.5g}  alpha_wf={r.alpha_wf:.5g}  "
                      f"ratio={r.ratio:.3f}")
    except Exception as e:  # noqa: BLE001 - CLI boundary
        log.debug("failure", exc_info=True)
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

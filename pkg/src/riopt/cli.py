"""Benchmark command line.

    bench frechet|quadgame|robust-pca|verify|sweep --config <path> --out <dir>
          [--seed N] [--rounds N] [--timing]

Exit codes: 0 success, 2 configuration error, 3 numeric failure (including a
failing verification suite).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .bench import (
    ConfigError,
    ExperimentConfig,
    expand_sweep_file,
    run_experiment,
    sweep,
)
from .geometry import FrechetMeanError, GeometryError

_SUBCOMMANDS = {
    "frechet": "frechet",
    "quadgame": "quadgame",
    "robust-pca": "robust_pca",
    "verify": "verify",
}


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in list(_SUBCOMMANDS) + ["sweep"]:
        p = sub.add_parser(name)
        p.add_argument("--config", type=str, default=None, help="JSON config file")
        p.add_argument("--out", type=str, required=True, help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override config seed")
        p.add_argument("--rounds", type=int, default=None, help="override config T")
        p.add_argument(
            "--timing",
            action="store_true",
            help="record wall time per row (makes the CSV non-reproducible)",
        )
    return parser


def _resolve_config(args) -> ExperimentConfig:
    experiment = _SUBCOMMANDS[args.command]
    raw = _load_json(args.config) if args.config else {}
    raw = dict(raw)
    stated = raw.setdefault("experiment", experiment)
    if stated != experiment:
        raise ConfigError(
            f"config experiment {stated!r} does not match subcommand {args.command!r}"
        )
    cfg = ExperimentConfig.from_dict(raw)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.rounds is not None:
        overrides["T"] = args.rounds
    if args.timing:
        overrides["record_timing"] = True
    if overrides:
        cfg = dataclasses.replace(cfg, **overrides)
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "sweep":
            if args.config is None:
                raise ConfigError("sweep requires --config")
            raw = _load_json(args.config)
            configs = expand_sweep_file(raw)
            if args.seed is not None:
                configs = [dataclasses.replace(c, seed=args.seed) for c in configs]
            if args.rounds is not None:
                configs = [dataclasses.replace(c, T=args.rounds) for c in configs]
            report = sweep(configs, out=args.out)
            failed = [r for r in report["runs"] if r["status"] != "ok"]
            for r in failed:
                print(f"run {r['index']}: {r['error']}", file=sys.stderr)
            return 3 if failed and len(failed) == len(report["runs"]) else 0
        cfg = _resolve_config(args)
        result = run_experiment(cfg, out=args.out)
        if cfg.experiment == "verify" and not result.summary["passed"]:
            print("verification suite FAILED", file=sys.stderr)
            return 3
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (GeometryError, FrechetMeanError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

"""Command line interface.

Subcommands: run, sweep, regime, converge.
Exit codes: 0 success, 2 invalid configuration, 3 numerical instability,
4 sweep finished with failed runs.
"""
from __future__ import annotations

import argparse
import sys

from .config import ConfigError, RunConfig, load_config
from .dynamics import NumericalInstabilityError
from .ledger import LedgerInvariantError
from .model import ModelError
from .regime import QuadratureError
from . import runner

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICS = 3
EXIT_PARTIAL = 4


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("-c", "--config", help="YAML config path (defaults built in)")
    p.add_argument("-o", "--output", default="out", help="output directory")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ottosim",
        description="Driven resonant-level Otto engine simulator "
                    "(correlator dynamics + cycle-resolved thermodynamics)",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="single run: per-cycle ledger CSV + summary")
    _add_common(p)

    p = sub.add_parser("sweep", help="one run per sweep-axis combination")
    _add_common(p)
    p.add_argument("-w", "--workers", type=int, default=1)

    p = sub.add_parser("regime", help="(eps1, eps2) engine-region map CSV")
    _add_common(p)

    p = sub.add_parser("converge", help="convergence report over numerics axes")
    _add_common(p)
    return ap


def _load(args) -> RunConfig:
    if args.config:
        return load_config(args.config)
    return RunConfig().validate()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command == "run":
            summary = runner.run_to_directory(cfg, args.output)
            if args.verbose:
                for k in sorted(summary):
                    print(f"{k}: {summary[k]}")
            print(f"run complete: {args.output}/cycles.csv")
            return EXIT_OK

        if args.command == "sweep":
            if not cfg.sweep:
                print("error: sweep requires at least one non-empty axis",
                      file=sys.stderr)
                return EXIT_CONFIG
            results, failed = runner.run_sweep(cfg, args.output, workers=args.workers)
            for combo, _, err in results:
                tag = runner.sweep_dirname(combo)
                print(f"{tag}: {'ok' if err is None else err}")
            if failed:
                print(f"error: {failed} of {len(results)} runs failed", file=sys.stderr)
                return EXIT_PARTIAL
            return EXIT_OK

        if args.command == "regime":
            runner.run_regime(cfg, args.output)
            print(f"regime map written: {args.output}/regime.csv")
            return EXIT_OK

        if args.command == "converge":
            axes = {k: v for k, v in cfg.sweep.items() if k != "Gamma"}
            if not axes:
                print("error: converge requires numerics sweep axes "
                      "(delta_eps, D, dt, gamma)", file=sys.stderr)
                return EXIT_CONFIG
            import dataclasses
            report = runner.run_converge(
                dataclasses.replace(cfg, sweep=axes), args.output)
            print(f"convergence {'PASS' if report['passed'] else 'FAIL'}: "
                  f"{args.output}/convergence.json")
            return EXIT_OK
    except (ConfigError, ModelError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalInstabilityError, LedgerInvariantError, QuadratureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICS
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())

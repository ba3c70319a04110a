"""Command-line front end: ``aircomp-relay {run,sweep,oracle}``."""

from __future__ import annotations

import argparse
import logging
import sys

from .config import ConfigError, parse_config
from .evaluation import TrialError, run_monte_carlo, sweep_gamma, sweep_relay_fraction
from .oracles import CHECKS
from .report import run_artifacts, sweep_artifacts, write_files

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_RUNTIME = 4
EXIT_ORACLE = 5

log = logging.getLogger("aircomp_relay")


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _value_list(text):
    """``0.1,0.2,0.3`` or ``start:stop:step`` (inclusive stop)."""
    try:
        if ":" in text:
            start, stop, step = (float(x) for x in text.split(":"))
            if step == 0 or (stop - start) * step < 0:
                raise ValueError
            n = int(round((stop - start) / step)) + 1
            return [round(start + i * step, 12) for i in range(n)]
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad value list: {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty value list")
    return vals


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aircomp-relay",
                                     description="AirComp amplify-and-forward relay simulator")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="INI experiment config (defaults if omitted)")
        p.add_argument("--seed", type=int, help="master seed")
        p.add_argument("--trials", type=_positive_int, help="number of Monte Carlo trials")
        p.add_argument("--workers", type=_positive_int, help="worker processes")
        p.add_argument("--out", help="output directory")

    run = sub.add_parser("run", help="Monte Carlo run with per-metric CDF files")
    common(run)

    sweep = sub.add_parser("sweep", help="sweep gamma or the relay fraction")
    common(sweep)
    sweep.add_argument("--axis", required=True, choices=("gamma", "relay_fraction"))
    sweep.add_argument("--values", required=True, type=_value_list)

    oracle = sub.add_parser("oracle", help="brute-force cross-checks of the solvers")
    oracle.add_argument("--check", required=True, choices=sorted(CHECKS))
    oracle.add_argument("--instances", type=_positive_int, default=1000)
    oracle.add_argument("--seed", type=int, default=0)
    return parser


def _load(args):
    cfg = parse_config(args.config) if args.config else parse_config("")
    if args.seed is not None:
        cfg = cfg.replace("harness", master_seed=args.seed)
    if args.trials is not None:
        cfg = cfg.replace("harness", trial_count=args.trials, paper_scale=False)
    if args.workers is not None:
        cfg = cfg.replace("harness", workers=args.workers)
    if args.out is not None:
        cfg = cfg.replace("output", directory=args.out)
    return cfg


def _cmd_run(args):
    cfg = _load(args)
    report = run_monte_carlo(cfg)
    paths = write_files(run_artifacts(report), cfg.output.directory)
    for p in paths:
        print(p)
    return EXIT_OK


def _cmd_sweep(args):
    cfg = _load(args)
    if args.axis == "gamma":
        reports = sweep_gamma(cfg, args.values)
    else:
        reports = sweep_relay_fraction(cfg, args.values)
    paths = write_files(sweep_artifacts(reports, args.axis), cfg.output.directory)
    for p in paths:
        print(p)
    return EXIT_OK


def _cmd_oracle(args):
    rep = CHECKS[args.check](args.instances, seed=args.seed)
    print(rep.line())
    return EXIT_OK if rep.passed else EXIT_ORACLE


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = {"run": _cmd_run, "sweep": _cmd_sweep, "oracle": _cmd_oracle}[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        # sweep values out of range and similar argument problems
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TrialError, OSError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Curves are written as CSV (``x,value,err``, 12 significant digits, LF line
endings) to ``--out`` or standard output; progress and diagnostics go to
standard error. Exit status is 0 on success, 1 on a numerical failure and 2
on a usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import warnings
from dataclasses import dataclass

import numpy as np

from .equilibrium import VACUUM_FORCE_A4, eq_curve
from .modesum import vacuum_force
from .nonequilibrium import noneq_curve
from .numerics import NONEQUILIBRIUM_SETTINGS, QuadSettings
from .verification import verify

log = logging.getLogger("casimirkt")

EXIT_OK, EXIT_NUMERIC, EXIT_USAGE = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    lo: float | None = None
    hi: float | None = None
    samples: int | None = None
    settings: QuadSettings = NONEQUILIBRIUM_SETTINGS
    out: str | None = None
    workers: int = 1
    seed: int = 42


def format_number(v: float) -> str:
    """Positional decimal with 12 significant digits."""
    return np.format_float_positional(float(v), precision=12, unique=False,
                                      fractional=False, trim="-")


def write_csv(rows, out):
    lines = ["x,value,err"]
    lines += [",".join(format_number(v) for v in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="casimirkt",
        description="Casimir force ratios in vacuum, equilibrium and free-streaming photon gases.")
    parser.add_argument("-v", "--verbose", action="store_true", help="progress on stderr")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sub.add_parser("vacuum", help="print the vacuum force F0*a^4")

    eq = sub.add_parser("eq", help="equilibrium ratio R(aT) as CSV")
    eq.add_argument("--at-min", type=float, default=0.0)
    eq.add_argument("--at-max", type=float, default=4.0)
    eq.add_argument("--samples", type=int, default=200)
    eq.add_argument("--out", default=None, help="output path (default: stdout)")

    ne = sub.add_parser("noneq", help="free-streaming ratio R(t/a) as CSV")
    ne.add_argument("--t-min", type=float, default=0.0)
    ne.add_argument("--t-max", type=float, default=10.0)
    ne.add_argument("--samples", type=int, default=100)
    ne.add_argument("--abs-tol", type=float, default=NONEQUILIBRIUM_SETTINGS.abs_tol)
    ne.add_argument("--rel-tol", type=float, default=NONEQUILIBRIUM_SETTINGS.rel_tol)
    ne.add_argument("--workers", type=int, default=None,
                    help="worker processes (default: $CASIMIR_WORKERS or 1)")
    ne.add_argument("--out", default=None, help="output path (default: stdout)")

    ver = sub.add_parser("verify", help="seeded self-check; prints one JSON line per group")
    ver.add_argument("--seed", type=int, default=42)
    ver.add_argument("--samples", type=int, default=1000)
    return parser


def parse_config(parser, argv) -> RunConfig:
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(message)s")
    cmd = args.subcommand
    if cmd == "vacuum":
        return RunConfig(cmd)
    if cmd == "verify":
        if args.samples < 1:
            parser.error("--samples must be >= 1")
        return RunConfig(cmd, samples=args.samples, seed=args.seed)

    lo, hi = (args.at_min, args.at_max) if cmd == "eq" else (args.t_min, args.t_max)
    if not 0 <= lo < hi:
        parser.error(f"range must satisfy 0 <= min < max, got [{lo}, {hi}]")
    if args.samples < 2:
        parser.error("--samples must be >= 2")
    if cmd == "eq":
        return RunConfig(cmd, lo, hi, args.samples, out=args.out)

    if args.abs_tol <= 0 or args.rel_tol <= 0:
        parser.error("tolerances must be positive")
    workers = args.workers
    if workers is None:
        env = os.environ.get("CASIMIR_WORKERS", "1")
        try:
            workers = int(env)
        except ValueError:
            parser.error(f"CASIMIR_WORKERS must be an integer, got {env!r}")
    if workers < 1:
        parser.error("--workers must be >= 1")
    settings = QuadSettings(abs_tol=args.abs_tol, rel_tol=args.rel_tol)
    return RunConfig(cmd, lo, hi, args.samples, settings, args.out, workers)


def _execute(cfg: RunConfig) -> int:
    if cfg.subcommand == "vacuum":
        print(f"F0*a^4,{vacuum_force():.7f}")
        return EXIT_OK

    if cfg.subcommand == "verify":
        results = verify(cfg.seed, cfg.samples)
        for r in results:
            print(json.dumps(r.as_dict(), sort_keys=True))
        failed = [r.group for r in results if not r.passed]
        if failed:
            log.error("failed groups: %s", ", ".join(failed))
            return EXIT_NUMERIC
        return EXIT_OK

    if cfg.subcommand == "eq":
        rows = []
        for pt in eq_curve(cfg.lo, cfg.hi, cfg.samples):
            composed = (VACUUM_FORCE_A4 + pt.F_T_a4) / VACUUM_FORCE_A4
            rows.append((pt.aT, pt.R, abs(pt.R - composed)))
        write_csv(rows, cfg.out)
        return EXIT_OK

    log.info("sampling %d points on [%g, %g] with %d worker(s)",
             cfg.samples, cfg.lo, cfg.hi, cfg.workers)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        points = noneq_curve(cfg.lo, cfg.hi, cfg.samples, cfg.settings, cfg.workers)
    write_csv([(p.t_over_a, p.R, p.err) for p in points], cfg.out)
    return EXIT_OK


def run(argv=None) -> int:
    """Parse ``argv`` and execute; returns the exit status instead of exiting."""
    parser = build_parser()
    try:
        cfg = parse_config(parser, argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return _execute(cfg)
    except (ArithmeticError, FloatingPointError) as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERIC


def main():
    sys.exit(run())

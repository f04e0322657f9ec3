"""Command-line entry points.

Subcommands: `run <config>`, `check-inequalities --seed N`, and
`describe-indicatrix <config>`.  Exit codes: 0 success, 1 validation error,
2 runtime failure.
"""

import argparse
import sys

from ._backend import BACKEND
from .errors import (ConfigError, DegenerateTangent, InvalidInitialCurve, NonConvex,
                     NonPositiveRadius, OddHarmonic)
from .inequalities import run_suite
from .scenario import build_indicatrix_from_config, load_config, run_scenario

_VALIDATION_ERRORS = (ConfigError, OddHarmonic, NonConvex, NonPositiveRadius,
                      InvalidInitialCurve, DegenerateTangent, FileNotFoundError)


def _cmd_run(args):
    cfg = load_config(args.config)
    trajectory = run_scenario(cfg)
    last = trajectory.samples[-1].record
    print(f"backend: {BACKEND}")
    print(f"termination: {trajectory.termination.value} after {trajectory.steps} steps")
    print(f"final: t={last.time:.6e} L={last.L:.9e} A={last.A:.9e} "
          f"kosc={last.kosc:.6e} iso_ratio={last.iso_ratio:.9f}")
    print(f"monitor csv: {cfg.monitor_csv}")
    return 0


def _cmd_check(args):
    rows = run_suite(args.seed, count=args.count)
    width = max(len(r["name"]) for r in rows)
    print(f"{'oracle':<{width}}  instances  failures  worst_margin")
    ok = True
    for r in rows:
        status = "PASS" if r["failures"] == 0 else "FAIL"
        ok = ok and r["failures"] == 0
        print(f"{r['name']:<{width}}  {r['instances']:>9d}  {r['failures']:>8d}  "
              f"{r['worst_margin']:>12.3e}  {status}")
    return 0 if ok else 2


def _cmd_describe(args):
    cfg = load_config(args.config)
    ind = build_indicatrix_from_config(cfg)
    print(f"kind: {cfg.indicatrix_kind}")
    print(f"isoperimetrix area: {ind.area_isoperimetrix:.12f}")
    print(f"Q_star: {ind.q_star:.12e}")
    print(f"Q_max: {ind.q_max:.12e}")
    print(f"convexity margin (min r^2 + 2 r_t^2 - r r_tt): {ind.convexity_margin:.12e}")
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="minkflow",
        description="Anisotropic polyharmonic curve flow: runs and verification suites.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario config file")
    p_run.add_argument("config", help="path to the scenario config")

    p_chk = sub.add_parser("check-inequalities", help="randomized inequality-oracle table")
    p_chk.add_argument("--seed", type=int, default=0)
    p_chk.add_argument("--count", type=int, default=1000)

    p_desc = sub.add_parser("describe-indicatrix",
                            help="print body constants for a config's indicatrix")
    p_desc.add_argument("config", help="path to the scenario config")

    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "check-inequalities":
            return _cmd_check(args)
        return _cmd_describe(args)
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

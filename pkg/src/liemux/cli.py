"""Command-line runner for scenarios and convergence verification.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 divergence, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import os
import sys

from .scenarios import (
    ConfigError,
    apply_overrides,
    builtin_scenarios,
    load_scenario_file,
    resolve_builtin,
    run_scenario,
    verify_convergence,
)
from .simulator import DivergenceError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="liemux",
        description="Run multiplexed Dubins car scenarios and convergence checks.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    run_p = sub.add_parser("run", help="run a scenario JSON file or a builtin name")
    run_p.add_argument("scenario", help="path to a scenario file, or a builtin/group name")
    run_p.add_argument("--out-dir", default="out", help="directory for CSV/JSON/SVG output")
    run_p.add_argument("--dt", type=float, help="override the integrator step")
    run_p.add_argument("--t-end", type=float, help="override the run duration")
    run_p.add_argument("--delta", type=float, help="override the multiplexer leg duration")
    run_p.add_argument("--method", choices=("euler", "rk4"), help="override the integrator")
    run_p.add_argument(
        "--no-feedforward",
        action="store_true",
        help="drop the reference-rate feedforward in the pose controllers",
    )
    run_p.add_argument("--svg", action="store_true", help="also write an SVG of the planar path")

    ver_p = sub.add_parser("verify", help="check the per-cycle bracket displacement law")
    ver_p.add_argument(
        "--deltas",
        type=float,
        nargs="+",
        default=(0.2, 0.1, 0.05, 0.025),
        help="decreasing leg durations to test",
    )
    ver_p.add_argument("--x0", type=float, nargs=3, default=(0.0, 0.0, 0.0))
    ver_p.add_argument("--substeps", type=int, default=100, help="fine steps per leg")
    ver_p.add_argument("--method", choices=("euler", "rk4"), default="rk4")

    sub.add_parser("list-builtins", help="list builtin scenario groups and members")
    return parser


def _cmd_run(args) -> int:
    if os.path.exists(args.scenario):
        scenarios = (load_scenario_file(args.scenario),)
    else:
        scenarios = resolve_builtin(args.scenario)
    for s in scenarios:
        s = apply_overrides(
            s,
            dt=args.dt,
            t_end=args.t_end,
            delta=args.delta,
            method=args.method,
            feedforward=False if args.no_feedforward else None,
        )
        _, summary = run_scenario(s, args.out_dir, svg=args.svg)
        disp = summary["position_displacement_norm"]
        line = (
            f"{summary['name']}: final={_fmt(summary['final_state'])} "
            f"|pos displacement|={disp:.4f}"
        )
        if summary["delta_rounded"]:
            line += (
                f" (delta {summary['requested_delta']:g} rounded to "
                f"{summary['effective_delta']:g})"
            )
        if "tail_position_error" in summary:
            line += (
                f" tail pos err={summary['tail_position_error']:.4f} "
                f"tail heading err={summary['tail_heading_error']:.4f}"
            )
        line += f" -> {summary['csv_path']}"
        print(line)
    return 0


def _fmt(values) -> str:
    return "(" + ", ".join(f"{v:.4f}" for v in values) + ")"


def _cmd_verify(args) -> int:
    report = verify_convergence(
        args.deltas, x0=args.x0, substeps=args.substeps, method=args.method
    )
    print(f"{'delta':>10s} {'dt':>12s} {'|err|/delta^2':>15s}")
    for row in report.rows:
        print(f"{row.delta:>10.5g} {row.dt:>12.5g} {row.normalized_error:>15.6e}")
    ok = report.slope >= 0.9
    print(f"fitted log-log slope: {report.slope:.3f} ({'PASS' if ok else 'FAIL'}, need >= 0.9)")
    return 0 if ok else 1


def _cmd_list() -> int:
    for group, members in builtin_scenarios().items():
        names = ", ".join(s.name for s in members)
        print(f"{group}: {names}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.cmd == "run":
            return _cmd_run(args)
        if args.cmd == "verify":
            return _cmd_verify(args)
        return _cmd_list()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DivergenceError as exc:
        print(f"divergence: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: generate, solve, sweep, validate."""

from __future__ import annotations

import argparse
import sys
from enum import IntEnum
from pathlib import Path

from .casestudy import CaseStudyConfig, CaseStudyError, build_case_study
from .formulation import FormulationError, build_lp, decompose_costs
from .mps import export_mps
from .sensitivity import (SWEEP_PARAMETERS, SweepError, figure_to_csv,
                          report_to_csv, run_sweep)
from .serialize import (SerializationError, load_instance, save_instance,
                        solution_to_json, write_text_atomic)
from .simplex import OPTIMAL, SolveOptions, solve
from .instance import validate_instance


class ExitCode(IntEnum):
    OK = 0
    VALIDATION = 1
    SOLVE = 2
    IO = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems instead of calling sys.exit."""

    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="prepos",
                     description="Pre-positioning of perishable relief supplies")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a seeded case-study instance")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", required=True, help="instance JSON path")
    gen.add_argument("--states", default=None, help="state coordinates CSV")
    gen.add_argument("--stages", type=int, default=4)
    gen.add_argument("--branching", type=int, default=3)
    gen.add_argument("--stacking-height", type=float, default=1.0)

    slv = sub.add_parser("solve", help="solve an instance to optimality")
    slv.add_argument("instance", help="instance JSON path")
    slv.add_argument("--out", default=None, help="solution JSON path")
    slv.add_argument("--mps", default=None, help="also export the LP as MPS")
    slv.add_argument("--tol", type=float, default=None,
                     help="feasibility and optimality tolerance")

    swp = sub.add_parser("sweep", help="re-solve under scaled unit costs")
    swp.add_argument("instance", help="instance JSON path")
    swp.add_argument("--param", required=True, choices=SWEEP_PARAMETERS)
    swp.add_argument("--multipliers", required=True,
                     help="comma-separated positive factors, e.g. 0.5,0.75,1.25")
    swp.add_argument("--csv", default=None, help="report CSV path")
    swp.add_argument("--figure-csv", default=None,
                     help="economic/penalty plot data CSV path")
    swp.add_argument("--tol", type=float, default=None)

    val = sub.add_parser("validate", help="check instance and tree invariants")
    val.add_argument("instance", help="instance JSON path")
    return parser


def _options(tol: float | None) -> SolveOptions:
    if tol is None:
        return SolveOptions()
    return SolveOptions(feasibility_tolerance=tol, optimality_tolerance=tol)


def _cmd_generate(args) -> int:
    try:
        cfg = CaseStudyConfig(seed=args.seed, stages=args.stages,
                              branching=args.branching, states_file=args.states,
                              stacking_height=args.stacking_height)
    except CaseStudyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ExitCode.VALIDATION
    try:
        inst = build_case_study(cfg)
        save_instance(inst, args.out)
    except (CaseStudyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ExitCode.IO
    tree = inst.tree
    print(f"wrote {args.out}: {len(inst.facilities)} facilities, "
          f"{len(inst.demand_points)} demand points, "
          f"{len(tree)} scenarios over {tree.horizon} stages")
    return ExitCode.OK


def _load(path: str):
    try:
        return load_instance(path)
    except (OSError, SerializationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return None


def _cmd_solve(args) -> int:
    inst = _load(args.instance)
    if inst is None:
        return ExitCode.IO
    try:
        lp = build_lp(inst)
    except FormulationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ExitCode.VALIDATION
    if args.mps is not None:
        try:
            write_text_atomic(args.mps, export_mps(lp))
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return ExitCode.IO
    sol = solve(lp, _options(args.tol))
    if sol.status != OPTIMAL:
        print(f"error: solve ended with status {sol.status}", file=sys.stderr)
        return ExitCode.SOLVE
    breakdown = decompose_costs(lp, sol.values)
    print(f"optimal objective {sol.objective:.6f} "
          f"({lp.n_columns} columns, {lp.n_rows} rows, {sol.iterations} pivots)")
    for name, value in breakdown.as_dict().items():
        print(f"  {name:>5}: {value:.6f}")
    if args.out is not None:
        try:
            write_text_atomic(args.out, solution_to_json(lp, sol, breakdown))
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return ExitCode.IO
        print(f"wrote {args.out}")
    return ExitCode.OK


def _cmd_sweep(args) -> int:
    inst = _load(args.instance)
    if inst is None:
        return ExitCode.IO
    try:
        multipliers = [float(tok) for tok in args.multipliers.split(",") if tok]
    except ValueError:
        print(f"error: bad multiplier list {args.multipliers!r}", file=sys.stderr)
        return ExitCode.VALIDATION
    if not multipliers or any(m <= 0.0 for m in multipliers):
        print("error: multipliers must be positive", file=sys.stderr)
        return ExitCode.VALIDATION
    try:
        report = run_sweep(inst, args.param, multipliers, _options(args.tol))
    except FormulationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ExitCode.VALIDATION
    except SweepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ExitCode.SOLVE
    print(f"{args.param} sweep, baseline total {report.baseline.total:.6f}")
    for row in report.rows:
        delta = row.deltas["total"]
        text = "n/a" if delta is None else f"{delta:+.2f}%"
        print(f"  x{row.multiplier:g}: total {row.breakdown.total:.6f} ({text})")
    try:
        if args.csv is not None:
            write_text_atomic(args.csv, report_to_csv(report))
            print(f"wrote {args.csv}")
        if args.figure_csv is not None:
            write_text_atomic(args.figure_csv, figure_to_csv(report))
            print(f"wrote {args.figure_csv}")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ExitCode.IO
    return ExitCode.OK


def _cmd_validate(args) -> int:
    inst = _load(args.instance)
    if inst is None:
        return ExitCode.IO
    problems = validate_instance(inst)
    problems += [f"tree: {v}" for v in inst.tree.validate()]
    if problems:
        for line in problems:
            print(line)
        return ExitCode.VALIDATION
    print("ok")
    return ExitCode.OK


_COMMANDS = {
    "generate": _cmd_generate,
    "solve": _cmd_solve,
    "sweep": _cmd_sweep,
    "validate": _cmd_validate,
}


def run_command(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return ExitCode.VALIDATION
    return int(_COMMANDS[args.command](args))


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()

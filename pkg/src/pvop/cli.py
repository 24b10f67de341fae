"""Command-line front end.

    pvop check FILE            regularity report and R0 check (exit 2 if anything is inconclusive)
    pvop solve FILE            weighted-sum solve over the sublevel set of x0
    pvop oracle FILE           grid Pareto front as CSV
    pvop stability FILE        perturbation probes (CSV per trial with --csv)
    pvop examples              run every bundled fixture, PASS/FAIL per fixture

Global options ``--seed``, ``--tol`` and ``--samples`` are accepted before or
after the subcommand.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .constraints import EmptySetError, asymptotic_cone, sample_base
from .instances import InstanceError, load_instance, load_fixtures
from .oracle import GridWindow, grid_front
from .regression import run_fixture
from .regularity import TOL_POS, analyze_regularity, wvcp_r0_check
from .solver import R_MAX, BUDGET, precheck_emptiness, solve
from .stability import (EPSILONS, PerturbationMode, PerturbationSpec, closed_graph_probe,
                        local_boundedness_probe, lower_degree_invariance, small_norm_persistence)

DEFAULTS = {"seed": 0, "tol": TOL_POS, "samples": 720}


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (default 0)")
    p.add_argument("--tol", type=float, default=argparse.SUPPRESS,
                   help=f"sign tolerance on unit-sphere values (default {TOL_POS:g})")
    p.add_argument("--samples", type=int, default=argparse.SUPPRESS,
                   help="cone base sample size (default 720)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="pvop", parents=[common],
                                     description="Regularity, Pareto solutions and stability "
                                                 "probes for polynomial vector optimization.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="regularity report and R0 check")
    p.add_argument("instance")

    p = sub.add_parser("solve", parents=[common], help="weighted-sum solve")
    p.add_argument("instance")
    p.add_argument("--lambda", dest="lam", type=_floats, help="weights, e.g. 1,1")
    p.add_argument("--x0", type=_floats, help="feasible reference point (default: witness)")
    p.add_argument("--starts", type=int, default=4, help="extra hit-and-run starts")
    p.add_argument("--rmax", type=float, default=R_MAX, help="escape radius")
    p.add_argument("--budget", type=int, default=BUDGET, help="evaluations per start")
    p.add_argument("--oracle-check", action="store_true",
                   help="check a found point against the instance window grid")
    p.add_argument("--whole-set", action="store_true",
                   help="minimise over K instead of the sublevel set of x0")

    p = sub.add_parser("oracle", parents=[common], help="grid Pareto front as CSV")
    p.add_argument("instance")
    p.add_argument("--lower", type=_floats)
    p.add_argument("--upper", type=_floats)
    p.add_argument("--resolution", type=int)
    p.add_argument("--all", action="store_true", help="emit every feasible node, not only the front")
    p.add_argument("-o", "--output", help="CSV path (default stdout)")

    p = sub.add_parser("stability", parents=[common], help="perturbation probes")
    p.add_argument("instance")
    p.add_argument("--probe", required=True,
                   choices=["lower-degree", "small-norm", "local-boundedness", "closed-graph"])
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--epsilon", type=_floats, default=list(EPSILONS),
                   help="radii for small-norm (comma-separated)")
    p.add_argument("--delta", type=float, default=1e-2, help="radius for local-boundedness")
    p.add_argument("--steps", type=int, default=20, help="sequence length for closed-graph")
    p.add_argument("--csv", help="write per-trial records to this CSV path")

    p = sub.add_parser("examples", parents=[common], help="run the bundled fixtures")
    p.add_argument("--dir", help="directory of fixture files (default: bundled)")
    p.add_argument("-v", "--verbose", action="store_true", help="print every check")
    return parser


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _cmd_check(args, opts) -> int:
    inst = load_instance(args.instance)
    cone = asymptotic_cone(inst.K)
    sample = sample_base(cone, opts["samples"], opts["seed"])
    report = analyze_regularity(inst.f, cone=cone, sample=sample, tol=opts["tol"])
    r0 = wvcp_r0_check(inst.f, cone, sample, opts["tol"])
    pre = precheck_emptiness(report)
    _emit({"instance": inst.name, "regularity": report.to_dict(), "r0": r0.to_dict(),
           "precheck": pre.to_dict() if pre else None})
    return report.exit_code


def _cmd_solve(args, opts) -> int:
    inst = load_instance(args.instance)
    if args.oracle_check and inst.window is None:
        raise InstanceError(f"{inst.source}: --oracle-check needs a window in the instance file")
    res = solve(inst.f, inst.K, args.lam, args.x0, starts=args.starts, rmax=args.rmax,
                seed=opts["seed"], budget=args.budget,
                oracle_window=inst.window if args.oracle_check else None,
                sublevel=not args.whole_set)
    _emit({"instance": inst.name, "result": res.to_dict()})
    return 0


def _cmd_oracle(args, opts) -> int:
    inst = load_instance(args.instance)
    window = inst.window
    if args.lower or args.upper or args.resolution:
        if window is None and not (args.lower and args.upper and args.resolution):
            raise InstanceError("give --lower, --upper and --resolution (no window in the file)")
        window = GridWindow(args.lower if args.lower else window.lower,
                            args.upper if args.upper else window.upper,
                            args.resolution if args.resolution else window.resolution)
    if window is None:
        raise InstanceError(f"{inst.source}: no window; pass --lower/--upper/--resolution")
    front = grid_front(inst.f, inst.K, window)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            front.write_csv(fh, only_front=not args.all)
    else:
        front.write_csv(sys.stdout, only_front=not args.all)
    return 0


def _cmd_stability(args, opts) -> int:
    inst = load_instance(args.instance)
    seed, samples = opts["seed"], opts["samples"]
    if args.probe == "lower-degree":
        spec = PerturbationSpec(PerturbationMode.LOWER_DEGREE, seed, args.trials or 50)
        report = lower_degree_invariance(inst.f, inst.K, spec, samples=samples)
    elif args.probe == "small-norm":
        report = small_norm_persistence(inst.f, inst.K, seed=seed, trials=args.trials or 50,
                                        epsilons=args.epsilon, samples=samples)
    elif args.probe == "local-boundedness":
        report = local_boundedness_probe(inst.f, inst.K, delta=args.delta, seed=seed,
                                         trials=args.trials or 10, samples=samples)
    else:
        report = closed_graph_probe(inst.f, inst.K, window=inst.window, steps=args.steps,
                                    seed=seed)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            report.write_csv(fh)
    _emit({"instance": inst.name, "probe": args.probe, "report": report.to_dict()})
    if report.refused:
        print(f"refused: {report.refused}", file=sys.stderr)
        return 1
    return 0


def _cmd_examples(args, opts) -> int:
    if args.dir:
        insts = [load_instance(p) for p in sorted(Path(args.dir).glob("*.json"))]
    else:
        insts = load_fixtures()
    failed = 0
    for inst in insts:
        res = run_fixture(inst, seed=opts["seed"], samples=opts["samples"], tol=opts["tol"])
        failed += not res.passed
        print(f"{'PASS' if res.passed else 'FAIL'}  {inst.name}  ({len(res.checks)} checks)")
        for label, ok, detail in res.checks:
            if args.verbose or not ok:
                print(f"    {'ok ' if ok else 'BAD'} {label}: {detail}")
    print(f"{len(insts) - failed}/{len(insts)} fixtures passed")
    return 0 if failed == 0 else 1


COMMANDS = {"check": _cmd_check, "solve": _cmd_solve, "oracle": _cmd_oracle,
            "stability": _cmd_stability, "examples": _cmd_examples}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    opts = {k: getattr(args, k, v) for k, v in DEFAULTS.items()}
    try:
        return COMMANDS[args.command](args, opts)
    except (InstanceError, EmptySetError, ValueError, OSError) as exc:
        print(f"pvop {args.command}: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Command line interface.

Subcommands:
  gen     write seeded random instance files
  solve   run one algorithm on an instance file, print solution + metrics
  bench   run an experiment config, write the result CSV
  verify  run the dual-ascent solver and audit every invariant

Exit codes: 0 ok, 1 usage or malformed input, 2 validation/invariant failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import replace

from .bench import BenchValidationError, ExperimentConfig, run_experiment, write_csv
from .generate import GenConfig, gen_instance
from .metrics import collect_metrics, validate
from .model import Instance, dump_instance, load_instance
from .primal_dual import (
    InsufficientCapacityError,
    CapacityInvariantError,
    check_charging,
    dual_objective,
    pd_solve,
    trace_to_json_list,
    verify_dual_feasibility,
)
from .reference import DEFAULT_NODE_BUDGET, ncs_solve, opt_solve

USAGE_EXIT = 1
FAILURE_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cmpc", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="write seeded random instances")
    gen.add_argument("--m", type=int, required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--kbar", type=float, required=True)
    gen.add_argument("--lam", type=float, default=1.0)
    gen.add_argument("--alpha", type=float, default=2.0)
    gen.add_argument("--c", type=float, default=1.0)
    gen.add_argument("--l", type=float, default=100.0)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--trials", type=int, default=1, help="instances to write (seed, seed+1, ...)")
    gen.add_argument("--out", default=".", help="output directory")

    solve = sub.add_parser("solve", help="solve one instance file")
    solve.add_argument("--algo", choices=("pd", "ncs", "opt"), required=True)
    solve.add_argument("--in", dest="infile", required=True)
    solve.add_argument("--oracle-budget", type=int, default=DEFAULT_NODE_BUDGET)
    solve.add_argument("--timing", action="store_true", help="include wall-clock runtime_ms")
    solve.add_argument("--trace", action="store_true", help="include the selection event trace (pd only)")

    bench = sub.add_parser("bench", help="run an experiment config")
    bench.add_argument("--config", required=True)
    bench.add_argument("--out", default=None, help="CSV path (overrides config)")
    bench.add_argument("--timing", action="store_true")

    verify = sub.add_parser("verify", help="solve and audit dual feasibility + charging")
    verify.add_argument("--in", dest="infile", required=True)
    verify.add_argument("--tol", type=float, default=1e-7)
    return parser


def _load_instance(path: str) -> Instance:
    try:
        return load_instance(path)
    except FileNotFoundError:
        print(f"{path}: no such file", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)
    except json.JSONDecodeError as exc:
        print(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)
    except ValueError as exc:
        print(f"{path}: {exc}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _cmd_gen(args) -> int:
    import os

    os.makedirs(args.out, exist_ok=True)
    for t in range(args.trials):
        seed = args.seed + t
        cfg = GenConfig(
            m=args.m, n=args.n, kbar=args.kbar, seed=seed,
            c=args.c, alpha=args.alpha, l=args.l, lam=args.lam,
        )
        path = os.path.join(args.out, f"instance_{seed:08d}.json")
        dump_instance(gen_instance(cfg), path)
        print(path)
    return 0


def _cmd_solve(args) -> int:
    instance = _load_instance(args.infile)
    start = time.perf_counter()
    trace = None
    try:
        if args.algo == "pd":
            solution, duals, trace = pd_solve(instance)
        elif args.algo == "ncs":
            solution = ncs_solve(instance)
        else:
            result = opt_solve(instance, args.oracle_budget)
            if result.status != "optimal":
                print(json.dumps({"algo": "opt", **result.to_json_dict()}, indent=2))
                return 0 if result.status == "budget_exceeded" else FAILURE_EXIT
            solution = result.solution
    except InsufficientCapacityError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return FAILURE_EXIT
    runtime_ms = (time.perf_counter() - start) * 1e3

    report = validate(instance, solution)
    if not report.ok:
        for code, detail in report.violations:
            print(f"constraint {code}: {detail}", file=sys.stderr)
        return FAILURE_EXIT

    metrics = collect_metrics(instance, solution, runtime_ms if args.timing else None)
    payload = {
        "algo": args.algo,
        "total_power": metrics.total_power,
        "runtime_ms": metrics.runtime_ms,
        "util_variance": metrics.util_variance,
        "per_server_load": list(metrics.per_server_load),
        "solution": solution.to_json_dict(),
    }
    if args.trace and trace is not None:
        payload["events"] = trace_to_json_list(trace)
    print(json.dumps(payload, indent=2))
    return 0


def _cmd_bench(args) -> int:
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            config = ExperimentConfig.from_json_dict(json.load(fh))
    except FileNotFoundError:
        print(f"{args.config}: no such file", file=sys.stderr)
        return USAGE_EXIT
    except json.JSONDecodeError as exc:
        print(f"{args.config}:{exc.lineno}:{exc.colno}: {exc.msg}", file=sys.stderr)
        return USAGE_EXIT
    except ValueError as exc:
        print(f"{args.config}: {exc}", file=sys.stderr)
        return USAGE_EXIT

    if args.timing:
        config = replace(config, timing=True)
    out = args.out or config.out
    if not out:
        print("bench: no output path (--out or config 'out')", file=sys.stderr)
        return USAGE_EXIT
    try:
        rows = run_experiment(config)
    except BenchValidationError as exc:
        print(f"bench aborted: {exc}", file=sys.stderr)
        return FAILURE_EXIT
    write_csv(rows, out)
    print(out)
    return 0


def _cmd_verify(args) -> int:
    instance = _load_instance(args.infile)
    try:
        solution, duals, trace = pd_solve(instance)
    except (InsufficientCapacityError, CapacityInvariantError) as exc:
        print(f"solver invariant failure: {exc}", file=sys.stderr)
        return FAILURE_EXIT

    failures = 0
    report = validate(instance, solution)
    if not report.ok:
        failures += len(report.violations)
        for code, detail in report.violations:
            print(f"constraint {code}: {detail}")
    dual_violations = verify_dual_feasibility(instance, duals, tol=args.tol)
    for v in dual_violations:
        print(str(v))
    failures += len(dual_violations)
    charging_violations = check_charging(instance, trace, duals, tol=args.tol)
    for v in charging_violations:
        print(str(v))
    failures += len(charging_violations)

    if failures:
        print(f"verify: {failures} violation(s)")
        return FAILURE_EXIT
    print(
        f"verify: ok (events={len(trace)}, total_power={solution.total_power}, "
        f"dual_objective={dual_objective(duals)})"
    )
    return 0


def cli(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {
        "gen": _cmd_gen,
        "solve": _cmd_solve,
        "bench": _cmd_bench,
        "verify": _cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except SystemExit as exc:
        return int(exc.code or 0)


def main() -> None:
    sys.exit(cli(sys.argv[1:]))


if __name__ == "__main__":
    main()

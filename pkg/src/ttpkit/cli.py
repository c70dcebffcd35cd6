"""Batch command-line surface for the pipeline.

Exit codes: 0 success, 1 a validation run found violations, 2 usage or
input-format errors, 3 a documented capability bound was exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import ktour, metric, reduction, roundrobin, supergames, ttp
from .errors import CapabilityError, FormatError, TtpkitError

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2
EXIT_CAPABILITY = 3


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    inst = metric.random_restricted_ktc(args.seed, args.n, args.k, args.wmax)
    text = metric.instance_to_text(inst)
    _emit(text, args.out)
    if args.out:
        print(f"instance n={inst.n} k={inst.k} wmax={inst.wmax} seed={args.seed} path={args.out}")
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = metric.load_instance(args.instance)
    if args.method == "exact":
        sol = ktour.brute_force_ktc(inst)
    else:
        sol = ktour.heuristic_ktc(inst, seed=args.seed)
    text = ktour.solution_to_text(sol)
    _emit(text, args.out)
    if args.out:
        print(f"solution weight={sol.weight} tours={len(sol.tours)} path={args.out}")
    return EXIT_OK


def _load_bundle(args) -> reduction.ReductionBundle:
    inst = metric.load_instance(args.instance)
    sol = ktour.load_solution(args.solution, inst)
    if args.mode == "mini":
        if args.d is None or args.s is None:
            raise FormatError("mini mode needs --d and --s")
        return reduction.build_mini_bundle(inst, sol, args.d, args.s)
    return reduction.build_bundle(inst, sol)


def _run_reduction(args) -> int:
    bundle = _load_bundle(args)
    sched = reduction.construct_schedule(bundle)
    report = reduction.bundle_cost(
        bundle, sched, dummy_sample=args.sample, threads=args.threads
    )
    extracted = reduction.best_extraction(
        sched, bundle, reduction.sample_dummies(bundle, args.sample)
    )
    bounds = reduction.verify_bounds(sched, bundle, extracted.weight, cost=report.total)
    _emit(bounds.render(), args.out)
    return EXIT_OK if bounds.ok else EXIT_VIOLATIONS


def cmd_build(args) -> int:
    if args.mode == "reduction":
        return _run_reduction(args)
    if args.instance:
        bundle = _load_bundle(args)
        sched = reduction.construct_schedule(bundle)
        k = bundle.k
    else:
        if args.k is None or args.d is None or args.s is None:
            raise FormatError("mini mode without an instance needs --k, --d and --s")
        layout = supergames.uniform_layout(args.k, args.d, args.s)
        sched = supergames.assemble_schedule(layout)
        k = args.k
    text = ttp.schedule_to_text(sched.materialize(), k)
    _emit(text, args.out)
    if args.out:
        print(f"schedule teams={sched.n_teams} days={sched.n_days} k={k} path={args.out}")
    return EXIT_OK


def cmd_tables(args) -> int:
    if args.which == "normal":
        block = supergames.extend_normal(3, 2, range(6), range(6, 12))
        text = ttp.schedule_to_text(block, 3)
    elif args.which == "left":
        block = supergames.extend_left(3, 2, range(6), range(6, 12))
        text = ttp.schedule_to_text(block, 3)
    else:
        text = ttp.schedule_to_text(roundrobin.special_ttp2(6), 2)
    _emit(text, args.out)
    return EXIT_OK


def cmd_validate(args) -> int:
    if (args.instance is None) == (args.schedule is None):
        raise FormatError("pass exactly one of --instance or --schedule")
    if args.instance:
        inst = metric.load_instance(args.instance)
        problems = metric.check_metric(inst.metric)
        label = f"instance n={inst.n}"
    else:
        sched, file_k = ttp.load_schedule(args.schedule)
        k = args.k if args.k is not None else file_k
        problems = ttp.validate_schedule(sched, k)
        label = f"schedule teams={sched.n_teams} days={sched.n_days} k={k}"
    if problems:
        print(f"{label} violations={len(problems)}")
        for v in problems[: args.limit]:
            print(f"  {v}")
        return EXIT_VIOLATIONS
    print(f"{label} feasible")
    return EXIT_OK


def cmd_cost(args) -> int:
    bundle = _load_bundle(args)
    sched, _ = ttp.load_schedule(args.schedule)
    if sched.n_teams != bundle.n_teams:
        raise FormatError(
            f"schedule has {sched.n_teams} teams but the layout implies {bundle.n_teams}"
        )
    report = reduction.bundle_cost(bundle, sched, full=True)
    print(f"cost={report.total}")
    return EXIT_OK


def cmd_extract(args) -> int:
    bundle = _load_bundle(args)
    sched, _ = ttp.load_schedule(args.schedule)
    if args.dummy is not None:
        sol = reduction.extract_ktc(sched, bundle, args.dummy)
    else:
        sample = reduction.sample_dummies(bundle, args.sample)
        sol = reduction.best_extraction(sched, bundle, sample)
    text = ktour.solution_to_text(sol)
    _emit(text, args.out)
    if args.out:
        print(f"extracted weight={sol.weight} tours={len(sol.tours)} path={args.out}")
    return EXIT_OK


def cmd_bounds(args) -> int:
    return _run_reduction(args)


def _add_bundle_flags(p, mode_default: str) -> None:
    p.add_argument("--instance", required=True, help="KTC v1 instance file")
    p.add_argument("--solution", required=True, help="KTCSOL v1 solution file")
    p.add_argument("--mode", choices=("mini", "reduction"), default=mode_default)
    p.add_argument("--d", type=int, default=None, help="paths per super-team (mini mode)")
    p.add_argument("--s", type=int, default=None, help="super-team count (mini mode)")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="ttpkit")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a restricted tour-cover instance")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--wmax", type=int, default=10)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="solve a tour-cover instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--method", choices=("exact", "heuristic"), default="heuristic")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("build", help="assemble a schedule (mini) or run the reduction")
    p.add_argument("--instance", default=None)
    p.add_argument("--solution", default=None)
    p.add_argument("--mode", choices=("mini", "reduction"), default="mini")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--sample", type=int, default=8)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("tables", help="print a reference extension table")
    p.add_argument("--which", choices=("normal", "left", "ttp2"), required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("validate", help="validate an instance or schedule file")
    p.add_argument("--instance", default=None)
    p.add_argument("--schedule", default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--limit", type=int, default=10)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("cost", help="exact cost of a schedule file over a layout")
    _add_bundle_flags(p, "mini")
    p.add_argument("--schedule", required=True)
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("extract", help="extract a tour cover from a schedule")
    _add_bundle_flags(p, "mini")
    p.add_argument("--schedule", required=True)
    p.add_argument("--dummy", type=int, default=None)
    p.add_argument("--sample", type=int, default=8)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("bounds", help="run the pipeline and report the bound checks")
    _add_bundle_flags(p, "reduction")
    p.add_argument("--sample", type=int, default=8)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bounds)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except CapabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except (TtpkitError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

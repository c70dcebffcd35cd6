#!/usr/bin/env python3
"""Benchmark the compiled and vectorised row kernels against each other.

Builds the full-scale layout for a small generated instance (around
157k teams and 315k days) and times whole-row generation for a slice of
teams through both kernel paths.  Run with TTPKIT_NO_NUMBA unset so the
compiled path is available.

Usage: python benchmarks/bench_kernels.py [--teams 16] [--n 5]
"""

import argparse
import time

import numpy as np

from ttpkit import _kernels, accel, ktour, metric, reduction


def row_args(sched, t):
    lay = sched.layout
    P, q = divmod(t, lay.m)
    return (
        lay.k,
        lay.d,
        lay.s,
        P,
        q,
        sched.seat_of[P],
        sched.team_at[P],
        sched.tt2.opp,
        sched.tt2.home,
    )


def bench(label, fn, team_ids, sched, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for t in team_ids:
            fn(*row_args(sched, t), 0, sched.n_days)
        best = min(best, time.perf_counter() - t0)
    cells = len(team_ids) * sched.n_days
    print(f"{label:>8}: {best:8.3f}s  ({cells / best / 1e6:8.1f} M cells/s)")
    return best


def run_numba(*args):
    g0, g1 = args[-2], args[-1]
    opp = np.empty(g1 - g0, dtype=np.int32)
    home = np.empty(g1 - g0, dtype=np.bool_)
    _kernels.team_row_loop(*args, opp, home)
    return opp, home


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--teams", type=int, default=16, help="rows to generate per path")
    ap.add_argument("--n", type=int, default=5, help="instance size for the layout")
    args = ap.parse_args()

    inst = metric.random_restricted_ktc(7, args.n, 3, 10)
    sol = ktour.heuristic_ktc(inst, seed=0)
    bundle = reduction.build_bundle(inst, sol)
    sched = reduction.construct_schedule(bundle, check="none")
    print(
        f"layout: k={bundle.k} d={bundle.d} s={bundle.s} "
        f"teams={sched.n_teams} days={sched.n_days}"
    )

    step = max(1, sched.n_teams // args.teams)
    team_ids = list(range(0, sched.n_teams, step))[: args.teams]

    if accel.USE_NUMBA:
        run_numba(*row_args(sched, 0), 0, 16)  # compile before timing
        t_nb = bench("numba", run_numba, team_ids, sched)
    else:
        t_nb = None
        print("   numba: disabled (TTPKIT_NO_NUMBA set or numba missing)")
    t_np = bench("numpy", _kernels.team_row_numpy, team_ids, sched)

    if t_nb:
        print(f"speedup: {t_np / t_nb:.1f}x")
        o1, h1 = run_numba(*row_args(sched, team_ids[-1]), 0, sched.n_days)
        o2, h2 = _kernels.team_row_numpy(*row_args(sched, team_ids[-1]), 0, sched.n_days)
        assert np.array_equal(o1, o2) and np.array_equal(h1, h2)
        print("paths agree on the sampled row")


if __name__ == "__main__":
    main()

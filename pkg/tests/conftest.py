import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ttpkit import ktour, metric, reduction
from ttpkit.metric import KTCInstance, MetricInstance

GOLDEN_DIR = Path(__file__).parent.parent / "goldens"


def line_metric(n: int) -> MetricInstance:
    idx = np.arange(n)
    return MetricInstance(np.abs(idx[:, None] - idx[None, :]).astype(np.int64))


@pytest.fixture(scope="session")
def line_instance() -> KTCInstance:
    # depot 0, stops 1..3 on a unit line
    return KTCInstance(line_metric(4), depot=0, k=3, restricted=True, wmax=3)


@pytest.fixture(scope="session")
def mini_bundle() -> reduction.ReductionBundle:
    inst = metric.random_restricted_ktc(3, 5, 3, 9)
    sol = ktour.KTCSolution(inst, ((1, 2, 3), (4,)))
    return reduction.build_mini_bundle(inst, sol, d=2, s=6)


@pytest.fixture(scope="session")
def mini_schedule(mini_bundle):
    return reduction.construct_schedule(mini_bundle, check="full")


@pytest.fixture(scope="session")
def full_pipeline():
    """The n=5 full-scale run shared by the large acceptance criteria."""
    timings = {}
    t0 = time.perf_counter()
    inst = metric.random_restricted_ktc(7, 5, 3, 10)
    sol = ktour.brute_force_ktc(inst)
    bundle = reduction.build_bundle(inst, sol)
    sched = reduction.construct_schedule(bundle, check="sample")
    timings["build"] = time.perf_counter() - t0

    t1 = time.perf_counter()
    cost = reduction.bundle_cost(bundle, sched, dummy_sample=8)
    timings["cost"] = time.perf_counter() - t1

    t2 = time.perf_counter()
    extracted = reduction.best_extraction(sched, bundle, reduction.sample_dummies(bundle, 8))
    timings["extract"] = time.perf_counter() - t2

    bounds = reduction.verify_bounds(sched, bundle, extracted.weight, cost=cost.total)
    timings["total"] = time.perf_counter() - t0
    return {
        "instance": inst,
        "solution": sol,
        "bundle": bundle,
        "schedule": sched,
        "cost": cost,
        "extracted": extracted,
        "bounds": bounds,
        "timings": timings,
    }

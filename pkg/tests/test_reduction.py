import numpy as np
import pytest

from ttpkit import ktour, metric, reduction, ttp
from ttpkit.errors import LayoutError
from ttpkit.ktour import KTCSolution
from ttpkit.metric import KTCInstance, MetricInstance
from ttpkit.reduction import (
    best_extraction,
    build_bundle,
    build_mini_bundle,
    extract_ktc,
    sample_dummies,
    super_slot_trip_count,
    verify_bounds,
)


class TestBundleArithmetic:
    def test_n10_counts(self):
        inst = metric.random_restricted_ktc(1, 10, 3, 5)
        sol = ktour.heuristic_ktc(inst, seed=0)
        bundle = build_bundle(inst, sol)
        assert bundle.m == 102
        assert bundle.dummy_count == 102 * (102**2 - 1) == 1_061_106
        assert bundle.s == 102**2

    def test_n5_counts(self):
        inst = metric.random_restricted_ktc(2, 5, 3, 5)
        sol = ktour.heuristic_ktc(inst, seed=0)
        bundle = build_bundle(inst, sol)
        assert bundle.m == 54
        assert bundle.n_teams == 54**3 == 157_464

    def test_sum_depot_unchanged_by_padding(self):
        inst = metric.random_restricted_ktc(2, 5, 3, 5)
        sol = ktour.heuristic_ktc(inst, seed=0)
        bundle = build_bundle(inst, sol)
        placed = bundle.layout.placement()
        d = inst.dist
        padded_sum = int(d[inst.depot, placed[: bundle.m]].sum())
        assert padded_sum == bundle.sum_depot

    def test_mini_rejects_excess_tours(self):
        inst = metric.random_restricted_ktc(3, 5, 3, 9)
        sol = KTCSolution(inst, ((1,), (2,), (3,), (4,)))
        with pytest.raises(LayoutError):
            build_mini_bundle(inst, sol, d=2, s=6)


class TestMiniPipeline:
    def test_dummy_weights_equal_packing(self, mini_bundle, mini_schedule):
        tinst = mini_bundle.ttp_instance()
        for t in mini_bundle.dummies():
            assert ttp.itinerary(tinst, mini_schedule, t).weight == mini_bundle.pack_weight

    def test_core_trip_counts(self, mini_bundle, mini_schedule):
        base = mini_bundle.d * (mini_bundle.s - 1)
        for q in range(mini_bundle.m):
            want = base if q % mini_bundle.k == 0 else base + 1
            assert super_slot_trip_count(mini_bundle, mini_schedule, q) == want

    def test_core_slot_weight_lower_bound(self, mini_bundle, mini_schedule):
        # during the cross slots each core team travels at least
        # 2*d*(s-1) times its depot distance
        tinst = mini_bundle.ttp_instance()
        phase = (mini_bundle.s - 1) * mini_bundle.layout.block_days
        d = mini_bundle.instance.dist
        for q in range(mini_bundle.m):
            opp, home = mini_schedule.team_row(q, 0, phase)
            own = tinst.placement[q]
            venues = np.where(home, own, tinst.placement[opp])
            walk = np.concatenate(([own], venues, [own]))
            w = int(d[walk[:-1], walk[1:]].sum())
            w_leg = int(d[mini_bundle.instance.depot, own])
            assert w >= 2 * mini_bundle.d * (mini_bundle.s - 1) * w_leg

    def test_extraction_recovers_input(self, mini_bundle, mini_schedule):
        for t in list(mini_bundle.dummies())[:6]:
            sol = extract_ktc(mini_schedule, mini_bundle, t)
            assert ktour.validate_ktc_solution(sol) == []
            assert all(len(tour) <= mini_bundle.k for tour in sol.tours)
            assert sol.weight == mini_bundle.pack_weight
            assert sol.canonical() == mini_bundle.solution.canonical()

    def test_best_extraction(self, mini_bundle, mini_schedule):
        best = best_extraction(mini_schedule, mini_bundle, mini_bundle.dummies())
        assert best.weight == mini_bundle.pack_weight
        one = extract_ktc(mini_schedule, mini_bundle, mini_bundle.m + 3)
        only = best_extraction(mini_schedule, mini_bundle, [mini_bundle.m + 3])
        assert only.weight == one.weight

    def test_extract_rejects_core_team(self, mini_bundle, mini_schedule):
        with pytest.raises(ValueError):
            extract_ktc(mini_schedule, mini_bundle, 0)

    def test_bounds_pass(self, mini_bundle, mini_schedule):
        best = best_extraction(mini_schedule, mini_bundle, sample_dummies(mini_bundle, 8))
        report = verify_bounds(mini_schedule, mini_bundle, best.weight)
        assert report.lower.passed and report.upper.passed and report.lred.passed
        assert report.render().startswith("BOUNDS 1\n")

    def test_sample_helper(self, mini_bundle):
        assert sample_dummies(mini_bundle, 999) == list(mini_bundle.dummies())
        assert len(sample_dummies(mini_bundle, 4)) == 4


def far_vertex_bundle():
    # vertices: depot, three near stops, one dominant far stop
    d = np.array(
        [
            [0, 1, 1, 1, 1000],
            [1, 0, 2, 2, 1001],
            [1, 2, 0, 2, 1001],
            [1, 2, 2, 0, 1001],
            [1000, 1001, 1001, 1001, 0],
        ],
        dtype=np.int64,
    )
    inst = KTCInstance(MetricInstance(d), depot=0, k=3, restricted=True, wmax=1000)
    sol = KTCSolution(inst, ((1, 2, 3), (4,)))
    return build_mini_bundle(inst, sol, d=2, s=6)


class TestDegradedSchedule:
    def test_upper_bound_detects_rerouting(self):
        bundle = far_vertex_bundle()
        sched = reduction.construct_schedule(bundle, check="full")
        dense = sched.materialize()
        baseline = reduction.bundle_cost(bundle, dense, full=True).total
        best = best_extraction(dense, bundle, sample_dummies(bundle, 8))
        assert verify_bounds(dense, bundle, best.weight, cost=baseline).ok

        # reroute every dummy through the real vertices: each game a dummy
        # hosts against a core team on a real vertex is flipped to an away
        # visit, leaving mutual consistency intact
        opp = dense.opp.copy()
        home = dense.home.copy()
        placement = bundle.layout.placement()
        for t in bundle.dummies():
            for g in range(dense.n_days):
                o = opp[t, g]
                if o < bundle.m and placement[o] != bundle.instance.depot and home[t, g]:
                    home[t, g] = False
                    home[o, g] = True
        degraded = ttp.DenseSchedule(opp, home)
        cost = reduction.bundle_cost(bundle, degraded, full=True).total
        assert cost > baseline
        report = verify_bounds(degraded, bundle, best.weight, cost=cost)
        assert not report.upper.passed
        assert report.lower.passed

    def test_zero_metric_all_sides_zero(self):
        d = np.zeros((5, 5), dtype=np.int64)
        inst = KTCInstance(MetricInstance(d), depot=0, k=3)
        sol = KTCSolution(inst, ((1, 2, 3), (4,)))
        bundle = build_mini_bundle(inst, sol, d=2, s=4)
        sched = reduction.construct_schedule(bundle, check="full")
        best = best_extraction(sched, bundle, sample_dummies(bundle, 4))
        report = verify_bounds(sched, bundle, best.weight)
        assert report.cost == 0
        assert report.lower == reduction.BoundCheck(0, 0, True)
        assert report.upper.passed and report.lred.passed

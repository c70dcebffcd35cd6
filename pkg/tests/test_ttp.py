import numpy as np
import pytest

from conftest import GOLDEN_DIR, line_metric
from oracles import day_walk_cost, ttp4_feasible_filter
from ttpkit import reduction, ttp
from ttpkit.errors import CapabilityError, FormatError
from ttpkit.metric import MetricInstance
from ttpkit.ttp import DenseSchedule, TTPInstance


@pytest.fixture(scope="module")
def table4():
    sched, k = ttp.load_schedule(GOLDEN_DIR / "table_ttp2_m6.ttpsched")
    return sched, k


class TestValidator:
    def test_golden_table_feasible(self, table4):
        sched, k = table4
        assert ttp.validate_schedule(sched, k) == []

    def test_repeat_detected(self, table4):
        sched, k = table4
        opp = sched.opp.copy()
        home = sched.home.copy()
        # replaying day 0 with venues reversed right after it repeats every pair
        opp[:, 1] = opp[:, 0]
        home[:, 1] = ~home[:, 0]
        problems = ttp.validate_schedule(DenseSchedule(opp, home), k)
        assert any(v.kind == "no-repeat" and v.day == 1 for v in problems)

    def test_run_bound_detected(self, table4):
        sched, _ = table4
        # the k=2 table contains 2-runs, so k=1 must flag one at its second day
        problems = ttp.validate_schedule(sched, 1)
        assert problems and all(v.kind == "bounded-by-k" for v in problems)
        assert min(v.day for v in problems) >= 1

    def test_opening_away_run_day(self):
        filt = ttp4_feasible_filter(3)
        pick = None
        for opp, home in filt.values():
            if not home[0, 0] and not home[0, 1] and not home[0, 2]:
                pick = (opp, home)
                break
        assert pick is not None
        problems = ttp.validate_schedule(DenseSchedule(*pick), 2)
        first = min(v for v in problems if v.kind == "bounded-by-k" and v.team == 0)
        assert first.day == 2  # the (k+1)-th opening away game, 0-based

    def test_mutual_violation(self, table4):
        sched, k = table4
        opp = sched.opp.copy()
        opp[0, 0] = 2
        problems = ttp.validate_schedule(DenseSchedule(opp, sched.home.copy()), k)
        assert any(v.kind == "mutual" for v in problems)

    def test_round_robin_violation(self, table4):
        sched, k = table4
        home = sched.home.copy()
        home[0, 0] = False
        home[5, 0] = True
        problems = ttp.validate_schedule(DenseSchedule(sched.opp.copy(), home), k)
        assert any(v.kind == "round-robin" for v in problems)


class TestItinerary:
    def test_colocated_zero(self, table4):
        sched, _ = table4
        inst = TTPInstance(MetricInstance(np.zeros((1, 1), dtype=np.int64)), np.zeros(6, int))
        assert all(ttp.itinerary(inst, sched, t).weight == 0 for t in range(6))

    def test_walk_structure(self, table4):
        sched, _ = table4
        inst = TTPInstance(line_metric(6), np.arange(6))
        it = ttp.itinerary(inst, sched, 0)
        assert len(it.venues) == sched.n_days + 2
        assert it.venues[0] == it.venues[-1] == 0

    def test_colocated_insertion_invariance(self):
        dist = line_metric(5).dist
        walk = [0, 3, 1, 0]
        base = sum(int(dist[a, b]) for a, b in zip(walk, walk[1:]))
        # vertex 4 placed on top of vertex 1 collapses in any leg through it
        d2 = dist.copy()
        d2[4, :] = dist[1, :]
        d2[:, 4] = dist[:, 1]
        d2[4, 4] = 0
        inserted = [0, 3, 4, 1, 0]
        cost = sum(int(d2[a, b]) for a, b in zip(inserted, inserted[1:]))
        assert cost == base

    def test_cost_matches_hand_walk(self, table4):
        sched, _ = table4
        pts = np.array([(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1)])
        diff = np.abs(pts[:, None, :] - pts[None, :, :]).sum(axis=2)  # grid distances
        inst = TTPInstance(MetricInstance(diff.astype(np.int64)), np.arange(6))
        total = ttp.schedule_cost(inst, sched).total
        assert total == day_walk_cost(inst.metric.dist, inst.placement, sched.opp, sched.home)


class TestCost:
    def test_streamed_equals_full_on_mini(self, mini_bundle, mini_schedule):
        full = reduction.bundle_cost(mini_bundle, mini_schedule, full=True)
        fast = reduction.bundle_cost(mini_bundle, mini_schedule)
        assert full.total == fast.total
        assert fast.dummy_each == mini_bundle.pack_weight

    def test_materialized_equals_iterator(self, mini_bundle, mini_schedule):
        dense = mini_schedule.materialize()
        a = reduction.bundle_cost(mini_bundle, mini_schedule, full=True).total
        b = reduction.bundle_cost(mini_bundle, dense, full=True).total
        assert a == b

    def test_threaded_matches(self, mini_bundle, mini_schedule):
        a = reduction.bundle_cost(mini_bundle, mini_schedule, full=True)
        b = reduction.bundle_cost(mini_bundle, mini_schedule, full=True, threads=4)
        assert a.total == b.total


class TestBruteForce:
    def test_colocated_cost_zero(self):
        inst = TTPInstance(MetricInstance(np.zeros((1, 1), dtype=np.int64)), np.zeros(4, int))
        _, cost = ttp.brute_force_ttp(inst, 3)
        assert cost == 0

    def test_feasible_set_nonempty(self):
        assert any(True for _ in ttp.enumerate_ttp_tables(4, 3))

    def test_optimum_matches_filter(self):
        inst = TTPInstance(line_metric(4), np.arange(4))
        sched, cost = ttp.brute_force_ttp(inst, 3)
        assert ttp.validate_schedule(sched, 3) == []
        best = min(
            day_walk_cost(inst.metric.dist, inst.placement, opp, home)
            for opp, home in ttp4_feasible_filter(3).values()
        )
        assert cost == best

    def test_capability_bound(self):
        inst = TTPInstance(line_metric(6), np.arange(6))
        with pytest.raises(CapabilityError):
            ttp.brute_force_ttp(inst, 3)


class TestScheduleFiles:
    def test_roundtrip(self, tmp_path, table4):
        sched, k = table4
        path = tmp_path / "s.ttpsched"
        ttp.save_schedule(sched, k, path)
        loaded, lk = ttp.load_schedule(path)
        assert lk == k
        assert np.array_equal(loaded.opp, sched.opp)
        assert np.array_equal(loaded.home, sched.home)

    def test_bad_header(self):
        with pytest.raises(FormatError):
            ttp.schedule_from_text("nope\n")

    def test_bad_row_count(self):
        with pytest.raises(FormatError, match="team rows"):
            ttp.schedule_from_text("TTPSCHED 1\nn=4 days=2 k=3\n2 -2\n-1 1\n")

    def test_zero_entry_rejected(self):
        text = "TTPSCHED 1\nn=2 days=1 k=3\n0\n-1\n"
        with pytest.raises(FormatError):
            ttp.schedule_from_text(text)

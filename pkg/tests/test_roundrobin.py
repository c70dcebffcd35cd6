import numpy as np
import pytest

from conftest import GOLDEN_DIR
from ttpkit import roundrobin, ttp
from ttpkit.errors import SeatDemandError
from ttpkit.roundrobin import circle_rounds, seat_assignment, special_ttp2


class TestCircleRounds:
    def test_s16_round1_leftmost(self):
        rounds = circle_rounds(16)
        assert rounds[0].leftmost == (15, 0)

    def test_s16_round2_leftmost(self):
        rounds = circle_rounds(16)
        assert rounds[1].leftmost == (15, 14)

    def test_s4_pair_coverage(self):
        rounds = circle_rounds(4)
        assert len(rounds) == 3
        seen = {frozenset(e) for rnd in rounds for e in rnd.edges()}
        assert len(seen) == 6

    @pytest.mark.parametrize("s", range(4, 65, 2))
    def test_coverage_exact(self, s):
        rounds = circle_rounds(s)
        seen = set()
        for rnd in rounds:
            nodes = set()
            for a, b in rnd.edges():
                seen.add(frozenset((a, b)))
                nodes.update((a, b))
            assert len(nodes) == s
        assert len(seen) == s * (s - 1) // 2

    def test_rejects_odd_or_tiny(self):
        with pytest.raises(ValueError):
            circle_rounds(5)
        with pytest.raises(ValueError):
            circle_rounds(2)


class TestSpecialTtp2:
    def test_m6_matches_golden(self):
        text = ttp.schedule_to_text(special_ttp2(6), 2)
        assert text == (GOLDEN_DIR / "table_ttp2_m6.ttpsched").read_text()

    def test_m6_day1_team1_hosts_6(self):
        sched = special_ttp2(6)
        assert sched.opp[0, 0] == 5 and bool(sched.home[0, 0])

    def test_m6_day3_team5_away_at_3(self):
        sched = special_ttp2(6)
        assert sched.opp[4, 2] == 2 and not sched.home[4, 2]

    def test_m6_openers(self):
        sched = special_ttp2(6)
        assert sched.openers("AH") == [1, 3, 5]
        assert sched.openers("HA") == [0, 2, 4]

    @pytest.mark.parametrize("m", range(4, 41, 2))
    def test_feasible_and_balanced(self, m):
        sched = special_ttp2(m)
        assert ttp.validate_schedule(sched, 2) == []
        assert len(sched.openers("AH")) == m // 2
        for t in range(m):
            assert sched.home[t, 0] != sched.home[t, 1]

    def test_rejects_odd(self):
        with pytest.raises(ValueError):
            special_ttp2(5)


class TestSeatAssignment:
    def test_unconstrained_is_identity(self):
        sched = special_ttp2(6)
        seats = seat_assignment(["either"] * 6, sched)
        assert list(seats) == list(range(6))

    def test_two_hard_demands(self):
        sched = special_ttp2(6)
        seats = seat_assignment(["AH", "AH", "either", "either", "either", "either"], sched)
        assert sched.opening(seats[0]) == "AH"
        assert sched.opening(seats[1]) == "AH"
        assert sorted(seats) == list(range(6))

    def test_mixed_demands(self):
        sched = special_ttp2(8)
        req = ["HA", "AH", "HA", "either", "AH", "either", "either", "either"]
        seats = seat_assignment(req, sched)
        for t, need in enumerate(req):
            if need != "either":
                assert sched.opening(seats[t]) == need
        assert sorted(seats) == list(range(8))

    def test_pigeonhole_error(self):
        sched = special_ttp2(6)
        with pytest.raises(SeatDemandError):
            seat_assignment(["AH"] * 4 + ["either"] * 2, sched)

    def test_deterministic(self):
        sched = special_ttp2(10)
        req = ["HA"] * 3 + ["either"] * 7
        assert list(seat_assignment(req, sched)) == list(seat_assignment(req, sched))

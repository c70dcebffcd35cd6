"""Single round-robin rotations and the opening-constrained TTP-2 table.

The rotation keeps the last participant fixed at the leftmost position
and advances every other participant one position clockwise per round.
The TTP-2 construction turns those rounds into a double round-robin in
which every team's first two days are away-home or home-away, half the
teams each way, so it can butt against a block that ends with a full
home or away run.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SeatDemandError


@dataclass(frozen=True)
class Round:
    """One rotation round: the fixed participant's pairing plus the up/down
    pairs from left to right (0-based participant ids)."""

    leftmost: tuple[int, int]
    pairs: tuple[tuple[int, int], ...]

    def edges(self):
        return (self.leftmost,) + self.pairs


def circle_rounds(s: int) -> tuple[Round, ...]:
    """Rotation pairings for ``s`` participants over s-1 rounds.

    Participant s-1 is fixed at the leftmost position.  In round r
    (1-based) cycle position i (1-based) holds moving participant
    (i - r) mod (s - 1); position 1 faces the fixed participant and
    position p faces position s+1-p.
    """
    if s < 4 or s % 2:
        raise ValueError(f"participant count must be even and >= 4, got {s}")
    fixed = s - 1
    rounds = []
    for r in range(1, s):
        def node(i: int) -> int:
            return (i - r) % (s - 1)

        pairs = tuple((node(p), node(s + 1 - p)) for p in range(2, s // 2 + 1))
        rounds.append(Round(leftmost=(fixed, node(1)), pairs=pairs))
    return tuple(rounds)


@dataclass(frozen=True, eq=False)
class Ttp2Schedule:
    """Double round-robin table for one group: opponent and home flag per
    team per day, 0-based, over 2m-2 days."""

    opp: np.ndarray
    home: np.ndarray

    @property
    def n_teams(self) -> int:
        return int(self.opp.shape[0])

    @property
    def n_days(self) -> int:
        return int(self.opp.shape[1])

    def team_row(self, t: int, g0: int = 0, g1: int | None = None):
        g1 = self.n_days if g1 is None else g1
        return self.opp[t, g0:g1], self.home[t, g0:g1]

    def opening(self, t: int) -> str:
        return "HA" if self.home[t, 0] else "AH"

    def openers(self, pattern: str) -> list[int]:
        return [t for t in range(self.n_teams) if self.opening(t) == pattern]


def special_ttp2(m: int) -> Ttp2Schedule:
    """Double round-robin on m teams (even, >= 4) with AH/HA openings.

    Day r of the first m-1 days pairs teams by the rotation; the up/down
    pair directions are fixed (up visits down on odd pairs, the reverse on
    even pairs) while the fixed team's edge flips direction daily, hosting
    on even days.  The second half replays days m-2, m-1, 1..m-3 with all
    venues reversed.
    """
    if m < 4 or m % 2:
        raise ValueError(f"team count must be even and >= 4, got {m}")
    first_half = []
    for r, rnd in enumerate(circle_rounds(m), start=1):
        fixed, mover = rnd.leftmost
        games = [(fixed, mover) if r % 2 else (mover, fixed)]  # (visitor, host)
        for t, (up, down) in enumerate(rnd.pairs, start=1):
            games.append((up, down) if t % 2 else (down, up))
        first_half.append(games)

    order = list(range(m - 1)) + [m - 3, m - 2] + list(range(m - 3))
    flips = [False] * (m - 1) + [True] * (m - 1)
    opp = np.empty((m, 2 * m - 2), dtype=np.int32)
    home = np.empty((m, 2 * m - 2), dtype=np.bool_)
    for day, (idx, flip) in enumerate(zip(order, flips)):
        for visitor, host in first_half[idx]:
            if flip:
                visitor, host = host, visitor
            opp[visitor, day] = host
            opp[host, day] = visitor
            home[visitor, day] = False
            home[host, day] = True
    return Ttp2Schedule(opp=opp, home=home)


def seat_assignment(required, sched: Ttp2Schedule) -> np.ndarray:
    """Map abstract teams to schedule seats honouring opening demands.

    ``required[t]`` is ``'AH'``, ``'HA'`` or ``'either'``.  Hard demands
    are placed first, lowest team index first, onto the lowest matching
    free seat; the remaining teams then fill the lowest free seats in
    order, so an unconstrained call is the identity mapping.
    """
    m = sched.n_teams
    if len(required) != m:
        raise SeatDemandError(f"need {m} demands, got {len(required)}")
    pools = {"AH": sched.openers("AH"), "HA": sched.openers("HA")}
    for pattern in ("AH", "HA"):
        want = sum(1 for r in required if r == pattern)
        if want > len(pools[pattern]):
            raise SeatDemandError(
                f"{want} teams demand {pattern} but only {len(pools[pattern])} seats open {pattern}"
            )
    taken = np.zeros(m, dtype=bool)
    seat_of = np.full(m, -1, dtype=np.int32)
    for t, need in enumerate(required):
        if need in ("AH", "HA"):
            seat = next(x for x in pools[need] if not taken[x])
            seat_of[t] = seat
            taken[seat] = True
        elif need != "either":
            raise SeatDemandError(f"unknown demand {need!r} for team {t}")
    free = iter(np.flatnonzero(~taken))
    for t, need in enumerate(required):
        if need == "either":
            seat_of[t] = next(free)
    return seat_of

"""Super-game slot plans, their day-level extensions, and assembly of
complete bounded-by-k double round-robin schedules.

Teams are grouped into s super-teams of m = k*d teams each (d vertex
paths of k stops).  The first s-1 time slots pair super-teams by a
rotation and expand each directed pairing into a 2kd-day block; the
final slot plays each super-team's internal double round-robin with its
opening seats chosen to respect trailing home/away runs.  Super-team 0
carries the path packing; in reduction mode every other super-team is
co-located with the depot and s = m^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import slot_role, team_row
from .errors import AssemblyError, LayoutError
from .ktour import KPathPacking, SaturatedInstance
from .metric import KTCInstance, MetricInstance
from .roundrobin import Ttp2Schedule, circle_rounds, seat_assignment, special_ttp2
from .ttp import DenseSchedule, validate_schedule, validate_schedule_sampled


@dataclass(frozen=True)
class SuperGame:
    """One directed super-pairing: ``src`` visits ``dst`` on the first
    block day; left-type games alternate venues in day pairs."""

    src: int
    dst: int
    left: bool = False


@dataclass(frozen=True)
class SlotPlan:
    s: int
    slots: tuple[tuple[SuperGame, ...], ...]


def slot_plan(s: int) -> SlotPlan:
    """Directed super-pairings for all s-1 rotation slots.

    Slot 1 is all normal: the fixed super-team visits position 1 and the
    up/down pair directions alternate starting up-visits-down.  Each
    later slot rotates and flips every pair direction; the leftmost edge
    becomes the single left-type game, keeping its direction in slot 2
    and flipping every slot afterwards.  The construction is asserted,
    not assumed: super-team 0 must always receive a normal game.
    """
    rounds = circle_rounds(s)
    slots = []
    for r, rnd in enumerate(rounds, start=1):
        games = []
        fixed, mover = rnd.leftmost
        if r == 1:
            games.append(SuperGame(fixed, mover, left=False))
        elif r % 2 == 0:
            games.append(SuperGame(fixed, mover, left=True))
        else:
            games.append(SuperGame(mover, fixed, left=True))
        for t, (up, down) in enumerate(rnd.pairs, start=1):
            if (t + r) % 2 == 0:
                games.append(SuperGame(up, down))
            else:
                games.append(SuperGame(down, up))
        slots.append(tuple(games))
    plan = SlotPlan(s=s, slots=tuple(slots))
    _check_plan(plan)
    return plan


def _check_plan(plan: SlotPlan) -> None:
    s = plan.s
    for r, games in enumerate(plan.slots, start=1):
        lefts = sum(1 for g in games if g.left)
        want = 0 if r == 1 else 1
        if lefts != want:
            raise AssemblyError(f"slot {r} has {lefts} left games, expected {want}")
        for g in games:
            if (g.src == 0 or g.dst == 0) and (g.left or g.dst != 0):
                raise AssemblyError(f"slot {r} pairs super-team 0 as {g}")
    seen = set()
    for games in plan.slots:
        for g in games:
            pair = frozenset((g.src, g.dst))
            if pair in seen:
                raise AssemblyError(f"super-teams {set(pair)} meet twice")
            seen.add(pair)
    if len(seen) != s * (s - 1) // 2:
        raise AssemblyError("rotation does not cover every super-team pair")


# --- day-level block extensions ---------------------------------------------


@dataclass(frozen=True, eq=False)
class GameBlock:
    """2kd-day table for one super-game.

    Row order is the visiting side's kd teams then the receiving side's;
    entries hold the opponent's global id and this team's home flag.
    """

    k: int
    d: int
    teams: tuple[int, ...]
    opp: np.ndarray
    home: np.ndarray

    @property
    def n_teams(self) -> int:
        return len(self.teams)

    @property
    def n_days(self) -> int:
        return int(self.opp.shape[1])

    def team_row(self, t: int, g0: int = 0, g1: int | None = None):
        g1 = self.n_days if g1 is None else g1
        return self.opp[t, g0:g1], self.home[t, g0:g1]


def _empty_block(k: int, d: int, x_teams, y_teams) -> tuple[GameBlock, np.ndarray, np.ndarray]:
    kd = k * d
    if len(x_teams) != kd or len(y_teams) != kd:
        raise ValueError(f"both sides need exactly {kd} teams")
    opp = np.full((2 * kd, 2 * kd), -1, dtype=np.int32)
    home = np.zeros((2 * kd, 2 * kd), dtype=np.bool_)
    block = GameBlock(k=k, d=d, teams=tuple(x_teams) + tuple(y_teams), opp=opp, home=home)
    return block, opp, home


def extend_normal(k: int, d: int, x_teams, y_teams) -> GameBlock:
    """Expand a normal super-game into 2kd days of games.

    Visiting team k*i+i' is away at receiving team k*j+j' on day
    (2k(i+j) + i' + j') mod 2kd and hosts the same opponent k days
    later, so visitors sweep each receiving path in k-day away runs.
    """
    block, opp, home = _empty_block(k, d, x_teams, y_teams)
    kd = k * d
    B = 2 * kd
    for i in range(d):
        for j in range(d):
            for i2 in range(k):
                for j2 in range(k):
                    x = k * i + i2
                    y = k * j + j2
                    away_day = (2 * k * (i + j) + i2 + j2) % B
                    home_day = (away_day + k) % B
                    opp[x, away_day] = y_teams[y]
                    home[x, away_day] = False
                    opp[kd + y, away_day] = x_teams[x]
                    home[kd + y, away_day] = True
                    opp[x, home_day] = y_teams[y]
                    home[x, home_day] = True
                    opp[kd + y, home_day] = x_teams[x]
                    home[kd + y, home_day] = False
    if (opp < 0).any():
        raise AssemblyError("normal extension left unfilled days")
    return block


def extend_left(k: int, d: int, x_teams, y_teams) -> GameBlock:
    """Expand a left super-game into 2kd days of games.

    Day i of the first half uses the matching that sends visitor q to
    receiver (i - q) mod kd, with venues alternating per day (visitors
    away on even days); the second half replays the first with every
    venue reversed.  Every team's interior day pairs come out away-home
    or home-away.
    """
    block, opp, home = _empty_block(k, d, x_teams, y_teams)
    kd = k * d
    for day in range(2 * kd):
        i = day if day < kd else day - kd
        visitor_away = (i % 2 == 0) if day < kd else (i % 2 == 1)
        for q in range(kd):
            p = (i - q) % kd
            opp[q, day] = y_teams[p]
            home[q, day] = not visitor_away
            opp[kd + p, day] = x_teams[q]
            home[kd + p, day] = visitor_away
    return block


# --- layouts and assembled schedules -----------------------------------------


@dataclass(frozen=True, eq=False)
class SuperTeamLayout:
    """Team placement for k*d*s teams in s super-teams of d k-paths.

    ``core_vertices`` lists the metric vertex of each super-team-0 team
    in path-major order; every other team sits on the depot vertex.
    """

    k: int
    d: int
    s: int
    metric: MetricInstance
    depot: int
    core_vertices: np.ndarray

    def __post_init__(self):
        v = np.ascontiguousarray(np.asarray(self.core_vertices, dtype=np.int32))
        v.setflags(write=False)
        object.__setattr__(self, "core_vertices", v)
        if self.k < 3 or self.d < 1:
            raise LayoutError(f"need k >= 3 and d >= 1, got k={self.k} d={self.d}")
        if self.m % 2 or self.m < 4:
            raise LayoutError(f"teams per super-team must be even and >= 4, got k*d={self.m}")
        if self.s % 2 or self.s < 4:
            raise LayoutError(f"super-team count must be even and >= 4, got s={self.s}")
        if v.shape != (self.m,):
            raise LayoutError(f"need {self.m} core vertices, got {v.shape}")

    @property
    def m(self) -> int:
        return self.k * self.d

    @property
    def n_teams(self) -> int:
        return self.m * self.s

    @property
    def block_days(self) -> int:
        return 2 * self.m

    @property
    def n_days(self) -> int:
        return 2 * (self.n_teams - 1)

    def placement(self) -> np.ndarray:
        out = np.full(self.n_teams, self.depot, dtype=np.int32)
        out[: self.m] = self.core_vertices
        return out


def layout_from_packing(
    inst: KTCInstance, sat: SaturatedInstance, packing: KPathPacking, s: int
) -> SuperTeamLayout:
    """Layout whose super-team 0 realises the packing's paths in order."""
    verts = [sat.position(v) for path in packing.paths for v in path]
    return SuperTeamLayout(
        k=packing.k,
        d=packing.d,
        s=s,
        metric=inst.metric,
        depot=inst.depot,
        core_vertices=np.array(verts, dtype=np.int32),
    )


def uniform_layout(k: int, d: int, s: int) -> SuperTeamLayout:
    """Single-vertex layout; useful for pure feasibility exercises."""
    metric = MetricInstance(np.zeros((1, 1), dtype=np.int64))
    return SuperTeamLayout(
        k=k,
        d=d,
        s=s,
        metric=metric,
        depot=0,
        core_vertices=np.zeros(k * d, dtype=np.int32),
    )


def intra_demands(layout: SuperTeamLayout, P: int) -> list[str]:
    """Opening demands for super-team P's internal round-robin.

    After a normal super-game the d teams at path offset 0 end the last
    slot with a full k-run (home runs for the visiting side, away runs
    for the receiving side) and must open with the opposite venue; after
    a left game every team ends on a 1-run and may open either way.
    """
    _, visiting, left = slot_role(P, layout.s - 1, layout.s)
    if left:
        return ["either"] * layout.m
    need = "AH" if visiting else "HA"
    return [need if q % layout.k == 0 else "either" for q in range(layout.m)]


class ConstructedSchedule:
    """Layout-backed schedule evaluated row by row.

    Nothing of size teams-by-days is allocated unless ``materialize`` is
    called, so reduction-scale tables stay virtual while single teams can
    still be streamed over any day range.
    """

    def __init__(self, layout: SuperTeamLayout):
        self.layout = layout
        m, s = layout.m, layout.s
        self.tt2 = special_ttp2(m)
        self.seat_of = np.empty((s, m), dtype=np.int32)
        self.team_at = np.empty((s, m), dtype=np.int32)
        for P in range(s):
            seats = seat_assignment(intra_demands(layout, P), self.tt2)
            self.seat_of[P] = seats
            self.team_at[P, seats] = np.arange(m, dtype=np.int32)

    @property
    def n_teams(self) -> int:
        return self.layout.n_teams

    @property
    def n_days(self) -> int:
        return self.layout.n_days

    def team_row(self, t: int, g0: int = 0, g1: int | None = None):
        g1 = self.n_days if g1 is None else g1
        if not 0 <= t < self.n_teams:
            raise ValueError(f"team {t} out of range")
        if not 0 <= g0 <= g1 <= self.n_days:
            raise ValueError(f"day range [{g0}, {g1}) out of bounds")
        lay = self.layout
        P, q = divmod(t, lay.m)
        return team_row(
            lay.k,
            lay.d,
            lay.s,
            P,
            q,
            self.seat_of[P],
            self.team_at[P],
            self.tt2.opp,
            self.tt2.home,
            g0,
            g1,
        )

    def materialize(self) -> DenseSchedule:
        from .ttp import as_tables

        opp, home = as_tables(self)
        return DenseSchedule(opp, home)


def assemble_schedule(layout: SuperTeamLayout, check: str = "auto") -> ConstructedSchedule:
    """Build the complete schedule for a layout and verify feasibility.

    ``check`` is ``'full'`` (materialise and validate every cell),
    ``'sample'`` (per-team checks on a deterministic team sample plus
    randomised cross-checks), ``'none'``, or ``'auto'`` which picks
    ``'full'`` below a size threshold.  Any violation aborts assembly.
    """
    sched = ConstructedSchedule(layout)
    if check == "auto":
        check = "full" if layout.n_teams * layout.n_days <= 2_000_000 else "sample"
    if check == "full":
        problems = validate_schedule(sched.materialize(), layout.k)
    elif check == "sample":
        teams = _sample_teams(layout)
        problems = validate_schedule_sampled(sched, layout.k, teams)
    elif check == "none":
        problems = []
    else:
        raise ValueError(f"unknown check mode {check!r}")
    if problems:
        raise AssemblyError(f"assembled schedule is infeasible: {problems[0]}")
    return sched


def _sample_teams(layout: SuperTeamLayout) -> list[int]:
    m, n = layout.m, layout.n_teams
    teams = set(range(m))  # the whole packing-bearing super-team
    teams.update(range(n - m, n))  # the fixed super-team
    step = max(1, (n - 2 * m) // 12)
    teams.update(range(m, n - m, step))
    return sorted(teams)

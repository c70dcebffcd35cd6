"""Tournament instances, schedules, the constraint validator, itineraries
under direct traveling, cost evaluation, and a toy-scale exhaustive solver.

A schedule is anything exposing ``n_teams``, ``n_days`` and
``team_row(t, g0, g1) -> (opponents, home_flags)``; tables may be fully
materialised (:class:`DenseSchedule`) or produced row by row from a
super-team layout (see :mod:`ttpkit.supergames`).
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import CapabilityError, CostMismatchError, FormatError
from .metric import MetricInstance
from .reports import Violation, sort_violations

MATERIALIZE_CELL_LIMIT = 20_000_000


@dataclass(frozen=True, eq=False)
class TTPInstance:
    """Team count, per-team home vertex, and the shared metric."""

    metric: MetricInstance
    placement: np.ndarray

    def __post_init__(self):
        p = np.ascontiguousarray(np.asarray(self.placement, dtype=np.int32))
        p.setflags(write=False)
        object.__setattr__(self, "placement", p)
        if self.n < 4 or self.n % 2:
            raise ValueError(f"team count must be even and >= 4, got {self.n}")
        if p.size and (p.min() < 0 or p.max() >= self.metric.size):
            raise ValueError("placement refers to a vertex outside the metric")

    @property
    def n(self) -> int:
        return int(self.placement.shape[0])


@dataclass(eq=False)
class DenseSchedule:
    """Materialised opponent/home tables, teams by days, 0-based."""

    opp: np.ndarray
    home: np.ndarray

    def __post_init__(self):
        self.opp = np.ascontiguousarray(self.opp, dtype=np.int32)
        self.home = np.ascontiguousarray(self.home, dtype=np.bool_)

    @property
    def n_teams(self) -> int:
        return int(self.opp.shape[0])

    @property
    def n_days(self) -> int:
        return int(self.opp.shape[1])

    def team_row(self, t: int, g0: int = 0, g1: int | None = None):
        g1 = self.n_days if g1 is None else g1
        return self.opp[t, g0:g1], self.home[t, g0:g1]


def as_tables(sched) -> tuple[np.ndarray, np.ndarray]:
    """Dense opponent/home tables for any schedule-like object."""
    if hasattr(sched, "opp") and hasattr(sched, "home"):
        return np.asarray(sched.opp), np.asarray(sched.home)
    n, days = sched.n_teams, sched.n_days
    if n * days > MATERIALIZE_CELL_LIMIT:
        raise CapabilityError(f"refusing to materialise {n}x{days} schedule")
    opp = np.empty((n, days), dtype=np.int32)
    home = np.empty((n, days), dtype=np.bool_)
    for t in range(n):
        opp[t], home[t] = sched.team_row(t)
    return opp, home


def _run_violations(home_row: np.ndarray, k: int, team: int) -> list[Violation]:
    """Bounded-by-k: report the day where a home/away run first exceeds k."""
    out = []
    bits = home_row.astype(np.int8)
    change = np.flatnonzero(np.diff(bits))
    starts = np.concatenate(([0], change + 1))
    ends = np.concatenate((change + 1, [len(bits)]))
    for a, b in zip(starts, ends):
        if b - a > k:
            word = "home" if home_row[a] else "away"
            out.append(
                Violation(
                    "bounded-by-k",
                    team=team,
                    day=int(a + k),
                    detail=f"{b - a} consecutive {word} games starting day {a}",
                )
            )
    return out


def validate_schedule(sched, k: int, max_items: int = 50) -> list[Violation]:
    """Full check: mutual consistency, double round-robin completeness,
    no-repeat and bounded-by-k.  Empty report iff feasible."""
    opp, home = as_tables(sched)
    n, days = opp.shape
    out: list[Violation] = []
    ids = np.arange(n, dtype=np.int32)[:, None]

    bad = (opp < 0) | (opp >= n) | (opp == ids)
    for t, g in np.argwhere(bad)[:max_items]:
        out.append(Violation("structure", team=int(t), day=int(g), detail=f"opponent {opp[t, g]}"))
    if out:
        return sort_violations(out)

    if days != 2 * (n - 1):
        out.append(Violation("length", detail=f"{days} days, expected {2 * (n - 1)}"))

    cols = np.arange(days, dtype=np.int64)[None, :]
    partner = opp[opp, cols]
    for t, g in np.argwhere(partner != ids)[:max_items]:
        out.append(
            Violation(
                "mutual",
                team=int(t),
                day=int(g),
                detail=f"opponent {opp[t, g]} lists {partner[t, g]}",
            )
        )
    clash = home[opp, cols] == home
    for t, g in np.argwhere(clash)[:max_items]:
        out.append(
            Violation(
                "venue",
                team=int(t),
                day=int(g),
                detail=f"both teams {'home' if home[t, g] else 'away'} vs {opp[t, g]}",
            )
        )

    hosts = np.where(home, ids, opp)
    guests = np.where(home, opp, ids)
    counts = np.zeros((n, n), dtype=np.int64)
    np.add.at(counts, (hosts.ravel(), guests.ravel()), 1)
    np.fill_diagonal(counts, 2)
    for a, b in np.argwhere(counts != 2)[:max_items]:
        out.append(
            Violation(
                "round-robin",
                team=int(a),
                detail=f"hosts {b} {counts[a, b] // 2}x, expected once",
            )
        )

    rep = opp[:, 1:] == opp[:, :-1]
    for t, g in np.argwhere(rep)[:max_items]:
        out.append(
            Violation(
                "no-repeat",
                team=int(t),
                day=int(g + 1),
                detail=f"plays {opp[t, g + 1]} on consecutive days",
            )
        )

    for t in range(n):
        out.extend(_run_violations(home[t], k, t))
        if len(out) > 4 * max_items:
            break
    return sort_violations(out)


def validate_schedule_sampled(
    sched, k: int, teams, pair_checks: int = 512, seed: int = 0
) -> list[Violation]:
    """Per-team checks on a team sample plus randomised mutual-consistency
    probes; used at scales where the full table cannot be materialised."""
    n = sched.n_teams
    days = sched.n_days
    out: list[Violation] = []
    teams = sorted(set(int(t) for t in teams))
    rows = {}
    for t in teams:
        opp, home = sched.team_row(t)
        rows[t] = (opp, home)
        if np.any((opp < 0) | (opp >= n) | (opp == t)):
            g = int(np.argmax((opp < 0) | (opp >= n) | (opp == t)))
            out.append(Violation("structure", team=t, day=g, detail=f"opponent {opp[g]}"))
            continue
        hosted = np.bincount(opp[home], minlength=n)
        visited = np.bincount(opp[~home], minlength=n)
        hosted[t] = 1
        visited[t] = 1
        if np.any(hosted != 1) or np.any(visited != 1):
            b = int(np.argmax((hosted != 1) | (visited != 1)))
            out.append(
                Violation(
                    "round-robin",
                    team=t,
                    detail=f"meets {b} {hosted[b]}x at home, {visited[b]}x away",
                )
            )
        rep = np.flatnonzero(opp[1:] == opp[:-1])
        for g in rep[:8]:
            out.append(
                Violation("no-repeat", team=t, day=int(g + 1), detail=f"plays {opp[g + 1]} again")
            )
        out.extend(_run_violations(home, k, t))
    rng = np.random.default_rng(seed)
    for _ in range(pair_checks):
        t = teams[int(rng.integers(len(teams)))]
        g = int(rng.integers(days))
        opp, home = rows[t]
        other = int(opp[g])
        oo, oh = sched.team_row(other, g, g + 1)
        if int(oo[0]) != t:
            out.append(
                Violation("mutual", team=t, day=g, detail=f"{other} lists {int(oo[0])}")
            )
        elif bool(oh[0]) == bool(home[g]):
            out.append(Violation("venue", team=t, day=g, detail=f"both sides {'home' if home[g] else 'away'}"))
    return sort_violations(out)


# --- itineraries and cost ---------------------------------------------------


@dataclass(frozen=True)
class Itinerary:
    """A team's venue walk: home, each day's game venue, home again."""

    team: int
    venues: np.ndarray
    weight: int


def _venue_walk(inst: TTPInstance, sched, t: int) -> np.ndarray:
    opp, home = sched.team_row(t)
    own = inst.placement[t]
    venues = np.where(home, own, inst.placement[opp])
    return np.concatenate(([own], venues, [own]))


def _walk_weight(inst: TTPInstance, walk: np.ndarray) -> int:
    return int(inst.metric.dist[walk[:-1], walk[1:]].sum())


def itinerary(inst: TTPInstance, sched, t: int) -> Itinerary:
    """Venue walk and exact traveling distance for one team."""
    walk = _venue_walk(inst, sched, t)
    return Itinerary(team=t, venues=walk, weight=_walk_weight(inst, walk))


def team_weight(inst: TTPInstance, sched, t: int) -> int:
    return _walk_weight(inst, _venue_walk(inst, sched, t))


@dataclass(frozen=True)
class CostReport:
    """Total cost plus the per-class split when a layout is known."""

    total: int
    core_total: int | None = None
    core_weights: tuple[int, ...] = ()
    dummy_each: int | None = None
    dummy_count: int = 0
    sampled_dummies: tuple[int, ...] = ()


def schedule_cost(
    inst: TTPInstance,
    sched,
    core_teams: int | None = None,
    dummy_sample: int = 8,
    full: bool = False,
    threads: int = 1,
) -> CostReport:
    """Exact total traveling distance of all teams.

    With ``core_teams`` set (and ``full`` false) the first ``core_teams``
    teams are streamed individually while the remaining co-located teams
    are costed once and multiplied out, after a sample of them is checked
    for agreement.  ``full=True`` forces the direct per-team summation.
    """
    n = sched.n_teams

    def weigh(t: int) -> int:
        return team_weight(inst, sched, t)

    def weigh_many(team_ids) -> list[int]:
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                return list(pool.map(weigh, team_ids))
        return [weigh(t) for t in team_ids]

    if full or core_teams is None:
        total = sum(weigh_many(range(n)))
        return CostReport(total=total)

    m = core_teams
    core = weigh_many(range(m))
    dummy_count = n - m
    ref = weigh(m)
    step = max(1, dummy_count // max(1, dummy_sample))
    sampled = tuple(range(m, n, step))[:dummy_sample]
    for t in weigh_many(sampled):
        if t != ref:
            raise CostMismatchError(
                f"co-located team weight {t} disagrees with reference {ref}"
            )
    total = sum(core) + dummy_count * ref
    return CostReport(
        total=total,
        core_total=sum(core),
        core_weights=tuple(core),
        dummy_each=ref,
        dummy_count=dummy_count,
        sampled_dummies=sampled,
    )


# --- toy-scale exhaustive search --------------------------------------------


def _perfect_matchings(items: tuple[int, ...]):
    if not items:
        yield ()
        return
    a = items[0]
    for idx in range(1, len(items)):
        b = items[idx]
        rest = items[1:idx] + items[idx + 1 :]
        for tail in _perfect_matchings(rest):
            yield ((a, b),) + tail


def enumerate_ttp_tables(n: int, k: int):
    """Yield every feasible (opp, home) table for n teams by pruned search
    over day-by-day directed matchings; metric-independent."""
    matchings = list(_perfect_matchings(tuple(range(n))))
    directed = []
    for mt in matchings:
        for bits in range(1 << len(mt)):
            games = tuple(
                (a, b) if not (bits >> i) & 1 else (b, a) for i, (a, b) in enumerate(mt)
            )
            directed.append(games)  # (host, guest)
    days = 2 * (n - 1)
    used = np.zeros((n, n), dtype=bool)
    prev = np.full(n, -1, dtype=np.int64)
    run_home = np.zeros(n, dtype=bool)
    run_len = np.zeros(n, dtype=np.int64)
    opp_tab = np.empty((n, days), dtype=np.int32)
    home_tab = np.empty((n, days), dtype=np.bool_)

    def place(day: int):
        if day == days:
            yield opp_tab.copy(), home_tab.copy()
            return
        for games in directed:
            ok = True
            for h, a in games:
                if used[h, a] or prev[h] == a:
                    ok = False
                    break
                if day > 0 and run_home[h] and run_len[h] >= k:
                    ok = False
                    break
                if day > 0 and not run_home[a] and run_len[a] >= k:
                    ok = False
                    break
            if not ok:
                continue
            saved_prev = prev.copy()
            saved_rh = run_home.copy()
            saved_rl = run_len.copy()
            for h, a in games:
                used[h, a] = True
                opp_tab[h, day] = a
                opp_tab[a, day] = h
                home_tab[h, day] = True
                home_tab[a, day] = False
                run_len[h] = saved_rl[h] + 1 if day > 0 and saved_rh[h] else 1
                run_home[h] = True
                run_len[a] = saved_rl[a] + 1 if day > 0 and not saved_rh[a] else 1
                run_home[a] = False
                prev[h] = a
                prev[a] = h
            yield from place(day + 1)
            for h, a in games:
                used[h, a] = False
            prev[:] = saved_prev
            run_home[:] = saved_rh
            run_len[:] = saved_rl

    yield from place(0)


def brute_force_ttp(inst: TTPInstance, k: int, allow_slow: bool = False):
    """Minimum-cost feasible schedule for tiny n by exhaustive search.

    Supports n=4 directly and n=6 behind ``allow_slow``.  Returns
    ``(DenseSchedule, cost)``; ties break on the lexicographically
    smallest table encoding.
    """
    n = inst.n
    if n != 4 and not (n == 6 and allow_slow):
        raise CapabilityError("exhaustive search supports n=4 (n=6 with allow_slow=True)")
    best = None
    for opp, home in enumerate_ttp_tables(n, k):
        sched = DenseSchedule(opp, home)
        cost = sum(team_weight(inst, sched, t) for t in range(n))
        key = (cost, opp.tobytes(), home.tobytes())
        if best is None or key < best[0]:
            best = (key, sched)
    if best is None:
        raise CapabilityError(f"no feasible schedule exists for n={n}, k={k}")
    return best[1], best[0][0]


# --- TTPSCHED v1 text format -------------------------------------------------


def schedule_to_text(sched, k: int) -> str:
    opp, home = as_tables(sched)
    n, days = opp.shape
    lines = ["TTPSCHED 1", f"n={n} days={days} k={k}"]
    signed = np.where(home, opp + 1, -(opp + 1))
    for row in signed:
        lines.append(" ".join(str(int(x)) for x in row))
    return "\n".join(lines) + "\n"


def save_schedule(sched, k: int, path) -> None:
    Path(path).write_text(schedule_to_text(sched, k))


def schedule_from_text(text: str) -> tuple[DenseSchedule, int]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "TTPSCHED 1":
        raise FormatError("missing 'TTPSCHED 1' header")
    if len(lines) < 2:
        raise FormatError("missing parameter line")
    params = {}
    for token in lines[1].split():
        if "=" not in token:
            raise FormatError(f"bad parameter token {token!r}")
        key, val = token.split("=", 1)
        try:
            params[key] = int(val)
        except ValueError:
            raise FormatError(f"non-integer value for {key!r}") from None
    for key in ("n", "days", "k"):
        if key not in params:
            raise FormatError(f"parameter line is missing {key!r}")
    n, days = params["n"], params["days"]
    rows = lines[2:]
    if len(rows) != n:
        raise FormatError(f"expected {n} team rows, found {len(rows)}")
    try:
        signed = np.array([[int(x) for x in row.split()] for row in rows], dtype=np.int64)
    except ValueError:
        raise FormatError("non-integer schedule entry") from None
    if signed.shape != (n, days):
        raise FormatError(f"rows must each have {days} entries")
    if np.any(signed == 0) or np.any(np.abs(signed) > n):
        raise FormatError("entries must be non-zero and within the team count")
    opp = (np.abs(signed) - 1).astype(np.int32)
    home = signed > 0
    return DenseSchedule(opp, home), params["k"]


def load_schedule(path) -> tuple[DenseSchedule, int]:
    return schedule_from_text(Path(path).read_text())

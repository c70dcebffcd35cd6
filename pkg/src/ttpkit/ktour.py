"""Tour covers: validation, exact and heuristic solvers, and saturation.

A tour is an ordered tuple of distinct non-depot vertices; the depot is
implicit at both ends.  A solution covers every non-depot vertex exactly
once with tours of at most k stops.  Saturation pads an instance with
co-located vertices at the depot so a solution reshapes into vertex
paths of exactly k stops each.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CapabilityError, FormatError
from .metric import KTCInstance
from .reports import Violation, sort_violations

Tour = tuple[int, ...]

BRUTE_FORCE_LIMIT = 9


def tour_weight(stops, inst: KTCInstance) -> int:
    """Weight of the depot-anchored cycle visiting ``stops`` in order."""
    if not stops:
        raise ValueError("a tour needs at least one stop")
    d = inst.dist
    o = inst.depot
    for v in stops:
        if not 0 <= v < inst.n:
            raise ValueError(f"stop {v} out of range")
        if v == o:
            raise ValueError("depot may not be listed as a stop")
    total = int(d[o, stops[0]]) + int(d[stops[-1], o])
    for a, b in zip(stops, stops[1:]):
        total += int(d[a, b])
    return total


@dataclass(frozen=True, eq=False)
class KTCSolution:
    instance: KTCInstance
    tours: tuple[Tour, ...]

    def __post_init__(self):
        object.__setattr__(self, "tours", tuple(tuple(int(v) for v in t) for t in self.tours))

    @property
    def weight(self) -> int:
        return sum(tour_weight(t, self.instance) for t in self.tours)

    def canonical(self) -> tuple[Tour, ...]:
        """Orientation- and order-independent encoding, used for ties."""
        return tuple(sorted(min(t, t[::-1]) for t in self.tours))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, KTCSolution)
            and self.instance == other.instance
            and self.canonical() == other.canonical()
        )


def validate_ktc_solution(sol: KTCSolution) -> list[Violation]:
    """Report capacity, coverage and vertex problems; empty iff valid."""
    inst = sol.instance
    out: list[Violation] = []
    seen: Counter[int] = Counter()
    for ti, tour in enumerate(sol.tours):
        if not tour:
            out.append(Violation("empty-tour", detail=f"tour {ti} has no stops"))
            continue
        if len(tour) > inst.k:
            out.append(
                Violation("capacity", detail=f"tour {ti} has {len(tour)} stops > k={inst.k}")
            )
        if len(set(tour)) != len(tour):
            out.append(Violation("repeat-stop", detail=f"tour {ti} repeats a vertex"))
        for v in tour:
            if not 0 <= v < inst.n:
                out.append(Violation("bad-vertex", detail=f"tour {ti} lists vertex {v}"))
            elif v == inst.depot:
                out.append(Violation("depot-stop", detail=f"tour {ti} lists the depot"))
            else:
                seen[v] += 1
    for v in inst.non_depot():
        if seen[v] == 0:
            out.append(Violation("coverage-gap", detail=f"vertex {v} is not covered"))
        elif seen[v] > 1:
            out.append(Violation("duplicate-coverage", detail=f"vertex {v} covered {seen[v]}x"))
    return sort_violations(out)


def _require_valid(sol: KTCSolution) -> None:
    problems = validate_ktc_solution(sol)
    if problems:
        raise ValueError(f"invalid solution: {problems[0]}")


# --- exact solver ----------------------------------------------------------


def _block_partitions(items: tuple[int, ...], kmax: int):
    """Set partitions into blocks of at most kmax elements."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for size in range(min(kmax - 1, len(rest)) + 1):
        for mates in itertools.combinations(rest, size):
            block = (first,) + mates
            taken = set(mates)
            remaining = tuple(x for x in rest if x not in taken)
            for tail in _block_partitions(remaining, kmax):
                yield [block] + tail


def brute_force_ktc(inst: KTCInstance) -> KTCSolution:
    """Optimal cover by exhaustive set-partition enumeration.

    Every partition of the non-depot vertices into blocks of at most k
    stops is priced with the cheapest depot-anchored visiting order per
    block.  Ties are broken by the lexicographically smallest canonical
    encoding so outputs are reproducible.  Refuses instances with more
    than ``BRUTE_FORCE_LIMIT`` non-depot vertices.
    """
    verts = tuple(inst.non_depot())
    if len(verts) > BRUTE_FORCE_LIMIT:
        raise CapabilityError(
            f"exact solver handles at most {BRUTE_FORCE_LIMIT} non-depot vertices, got {len(verts)}"
        )
    d = inst.dist.tolist()
    o = inst.depot

    cache: dict[frozenset, tuple[int, Tour]] = {}

    def best_tour(block: Tour) -> tuple[int, Tour]:
        key = frozenset(block)
        hit = cache.get(key)
        if hit is not None:
            return hit
        best = None
        for perm in itertools.permutations(block):
            cost = d[o][perm[0]] + d[perm[-1]][o]
            for a, b in zip(perm, perm[1:]):
                cost += d[a][b]
            enc = min(perm, perm[::-1])
            cand = (cost, enc)
            if best is None or cand < best:
                best = cand
        cache[key] = best
        return best

    best_key = None
    best_tours = None
    for blocks in _block_partitions(verts, inst.k):
        weight = 0
        tours = []
        for block in blocks:
            cost, enc = best_tour(block)
            weight += cost
            tours.append(enc)
        key = (weight, tuple(sorted(tours)))
        if best_key is None or key < best_key:
            best_key = key
            best_tours = key[1]
    return KTCSolution(inst, best_tours)


# --- heuristic solver ------------------------------------------------------


def _nearest_neighbor_order(inst: KTCInstance) -> list[int]:
    d = inst.dist
    cur = inst.depot
    todo = set(inst.non_depot())
    order = []
    while todo:
        nxt = min(todo, key=lambda v: (int(d[cur, v]), v))
        order.append(nxt)
        todo.remove(nxt)
        cur = nxt
    return order


def _two_opt(order: list[int], inst: KTCInstance) -> list[int]:
    """First-improvement 2-opt on the depot-rooted cycle, to local optimality."""
    d = inst.dist
    o = inst.depot
    tour = list(order)
    n = len(tour)
    improved = True
    while improved:
        improved = False
        for i in range(n - 1):
            a = o if i == 0 else tour[i - 1]
            b = tour[i]
            for j in range(i + 1, n):
                c = tour[j]
                e = o if j == n - 1 else tour[j + 1]
                delta = (d[a, c] + d[b, e]) - (d[a, b] + d[c, e])
                if delta < 0:
                    tour[i : j + 1] = reversed(tour[i : j + 1])
                    improved = True
                    b = tour[i]
    return tour


def _split_order(order: list[int], inst: KTCInstance) -> list[Tour]:
    """Optimal split of a visiting order into consecutive tours of <= k stops."""
    d = inst.dist
    o = inst.depot
    n = len(order)
    pref = [0] * n
    for i in range(1, n):
        pref[i] = pref[i - 1] + int(d[order[i - 1], order[i]])

    def seg_cost(j: int, i: int) -> int:
        # stops order[j:i]
        return int(d[o, order[j]]) + (pref[i - 1] - pref[j]) + int(d[order[i - 1], o])

    INF = float("inf")
    cost = [0] + [INF] * n
    cut = [0] * (n + 1)
    for i in range(1, n + 1):
        for j in range(max(0, i - inst.k), i):
            c = cost[j] + seg_cost(j, i)
            if c < cost[i]:
                cost[i] = c
                cut[i] = j
    tours = []
    i = n
    while i > 0:
        j = cut[i]
        tours.append(tuple(order[j:i]))
        i = j
    tours.reverse()
    return tours


def heuristic_ktc(inst: KTCInstance, seed: int = 0, restarts: int = 3) -> KTCSolution:
    """Route-first, split-second heuristic.

    Builds candidate giant orders (nearest neighbour from the depot plus
    seeded shuffles), improves each with first-improvement 2-opt, splits
    optimally into tours of at most k stops, and keeps the best result.
    Deterministic for a fixed seed.
    """
    if inst.n < 2:
        raise ValueError("need at least one non-depot vertex")
    rng = np.random.default_rng(seed)
    orders = [_nearest_neighbor_order(inst)]
    base = inst.non_depot()
    for _ in range(max(0, restarts - 1)):
        orders.append(list(rng.permutation(base)))
    best = None
    for order in orders:
        tours = _split_order(_two_opt(order, inst), inst)
        sol = KTCSolution(inst, tuple(tours))
        key = (sol.weight, sol.canonical())
        if best is None or key < best[0]:
            best = (key, sol)
    return best[1]


# --- saturation ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SaturatedInstance:
    """Base instance plus ``pad`` extra vertices co-located with the depot.

    Padded vertex ids continue after the base ids; ``position`` maps any
    padded-space id back to a base metric vertex.
    """

    base: KTCInstance
    pad: int

    def __post_init__(self):
        if self.pad < 0:
            raise ValueError("pad count must be non-negative")
        m = self.m
        if m % self.base.k:
            raise ValueError(f"non-depot count {m} not divisible by k={self.base.k}")
        if m % 2:
            raise ValueError(f"non-depot count {m} must be even")

    @property
    def m(self) -> int:
        return (self.base.n - 1) + self.pad

    @property
    def k(self) -> int:
        return self.base.k

    def position(self, v: int) -> int:
        return v if v < self.base.n else self.base.depot

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SaturatedInstance)
            and self.base == other.base
            and self.pad == other.pad
        )


@dataclass(frozen=True, eq=False)
class KPathPacking:
    """Partition of the padded non-depot vertices into paths of exactly k."""

    k: int
    m: int
    paths: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.m % self.k:
            raise ValueError("m must be divisible by k")
        if len(self.paths) != self.m // self.k:
            raise ValueError(f"expected {self.m // self.k} paths, got {len(self.paths)}")
        flat = [v for p in self.paths for v in p]
        if any(len(p) != self.k for p in self.paths):
            raise ValueError("every path must have exactly k vertices")
        if len(set(flat)) != len(flat) or len(flat) != self.m:
            raise ValueError("paths must partition all padded non-depot vertices")

    @property
    def d(self) -> int:
        return self.m // self.k


def packing_weight(packing: KPathPacking, sat: SaturatedInstance) -> int:
    """Sum of depot-anchored cycle weights over the packing's paths."""
    d = sat.base.dist
    o = sat.base.depot
    total = 0
    for path in packing.paths:
        pos = [sat.position(v) for v in path]
        total += int(d[o, pos[0]]) + int(d[pos[-1], o])
        for a, b in zip(pos, pos[1:]):
            total += int(d[a, b])
    return total


def saturation_pad(n: int, k: int) -> int:
    """Pad count that lets any solution fill into k-stop tours, with the
    padded non-depot total divisible by k and even."""
    pad = n * k * k + k - ((n - 1) % k)
    if ((n - 1) + pad) % 2:
        pad += k
    return pad


def _saturate(inst: KTCInstance, sol: KTCSolution, pad: int):
    _require_valid(sol)
    sat = SaturatedInstance(inst, pad)
    budget = sat.m // inst.k
    if len(sol.tours) > budget:
        raise ValueError(f"solution has {len(sol.tours)} tours but only {budget} paths fit")
    next_pad = inst.n
    paths = []
    for tour in sol.tours:
        fill = inst.k - len(tour)
        path = tour + tuple(range(next_pad, next_pad + fill))
        next_pad += fill
        paths.append(path)
    end = inst.n + pad
    while next_pad < end:
        paths.append(tuple(range(next_pad, next_pad + inst.k)))
        next_pad += inst.k
    packing = KPathPacking(k=inst.k, m=sat.m, paths=tuple(paths))
    return sat, packing


def saturate(inst: KTCInstance, sol: KTCSolution):
    """Pad the instance so ``sol`` reshapes into a full k-path packing.

    The pad count is the closed form n*k^2 + k - (n-1) mod k, plus k more
    if the resulting non-depot total would be odd.  Appended pad vertices
    sit on the depot, so the packing weight equals the solution weight.
    """
    return _saturate(inst, sol, saturation_pad(inst.n, inst.k))


def saturate_to(inst: KTCInstance, sol: KTCSolution, m: int):
    """Saturate with an explicit padded non-depot total ``m`` (desk scale)."""
    if m < inst.n - 1:
        raise ValueError(f"m={m} below the {inst.n - 1} existing non-depot vertices")
    return _saturate(inst, sol, m - (inst.n - 1))


# --- KTCSOL v1 text format -------------------------------------------------


def solution_to_text(sol: KTCSolution) -> str:
    lines = ["KTCSOL 1"]
    for tour in sol.tours:
        lines.append(" ".join(str(v + 1) for v in tour))
    lines.append(f"weight={sol.weight}")
    return "\n".join(lines) + "\n"


def save_solution(sol: KTCSolution, path) -> None:
    Path(path).write_text(solution_to_text(sol))


def solution_from_text(text: str, inst: KTCInstance) -> KTCSolution:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "KTCSOL 1":
        raise FormatError("missing 'KTCSOL 1' header")
    if len(lines) < 2 or not lines[-1].startswith("weight="):
        raise FormatError("missing trailing weight line")
    try:
        stated = int(lines[-1].split("=", 1)[1])
    except ValueError:
        raise FormatError("non-integer weight") from None
    tours = []
    for ln in lines[1:-1]:
        try:
            tours.append(tuple(int(x) - 1 for x in ln.split()))
        except ValueError:
            raise FormatError(f"non-integer tour entry in {ln!r}") from None
    sol = KTCSolution(inst, tuple(tours))
    problems = validate_ktc_solution(sol)
    if problems:
        raise FormatError(f"solution invalid for instance: {problems[0]}")
    if sol.weight != stated:
        raise FormatError(f"stated weight {stated} != recomputed {sol.weight}")
    return sol


def load_solution(path, inst: KTCInstance) -> KTCSolution:
    return solution_from_text(Path(path).read_text(), inst)

"""Integer metric spaces and depot-rooted tour-cover instances.

All distances are non-negative integers, so every validity check and
weight computation in the package is exact.  Vertices are 0-based in
memory; the text formats use 1-based indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError, MetricViolationError, RestrictedBoundsError
from .reports import Violation, sort_violations


@dataclass(frozen=True, eq=False)
class MetricInstance:
    """Symmetric integer metric given by a full distance matrix."""

    dist: np.ndarray

    def __post_init__(self):
        d = np.ascontiguousarray(np.asarray(self.dist, dtype=np.int64))
        d.setflags(write=False)
        object.__setattr__(self, "dist", d)

    @property
    def size(self) -> int:
        return int(self.dist.shape[0])

    def __eq__(self, other) -> bool:
        return isinstance(other, MetricInstance) and np.array_equal(self.dist, other.dist)


@dataclass(frozen=True, eq=False)
class KTCInstance:
    """Tour-cover instance: a metric, a depot vertex and the tour capacity k.

    On a restricted instance every depot distance must lie in [1, wmax];
    this is enforced at construction time.
    """

    metric: MetricInstance
    depot: int
    k: int
    restricted: bool = False
    wmax: int = 0

    def __post_init__(self):
        if self.k < 3:
            raise ValueError(f"tour capacity k must be >= 3, got {self.k}")
        if not 0 <= self.depot < self.metric.size:
            raise ValueError(f"depot {self.depot} out of range for {self.metric.size} vertices")
        if self.restricted:
            if self.wmax < 1:
                raise RestrictedBoundsError("restricted instance needs wmax >= 1")
            legs = np.delete(self.metric.dist[self.depot], self.depot)
            if legs.size and (legs.min() < 1 or legs.max() > self.wmax):
                raise RestrictedBoundsError(
                    f"depot distances must lie in [1, {self.wmax}], "
                    f"found range [{legs.min()}, {legs.max()}]"
                )

    @property
    def n(self) -> int:
        return self.metric.size

    @property
    def dist(self) -> np.ndarray:
        return self.metric.dist

    def non_depot(self) -> list[int]:
        return [v for v in range(self.n) if v != self.depot]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, KTCInstance)
            and self.metric == other.metric
            and (self.depot, self.k, self.restricted, self.wmax)
            == (other.depot, other.k, other.restricted, other.wmax)
        )


def check_metric(m: MetricInstance, max_items: int = 20) -> list[Violation]:
    """Report every violated metric invariant; an empty list means valid.

    Checks the distance table for squareness, non-negative entries, a zero
    diagonal, symmetry, and the exact integer triangle inequality.  At most
    ``max_items`` violations are listed per kind, but the list is empty if
    and only if the metric is valid.
    """
    d = m.dist
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        return [Violation("shape", detail=f"distance table has shape {d.shape}, not square")]
    n = d.shape[0]
    out: list[Violation] = []

    for u, v in np.argwhere(d < 0)[:max_items]:
        out.append(Violation("negative", detail=f"dist({u},{v})={d[u, v]}"))
    for u in np.flatnonzero(np.diagonal(d) != 0)[:max_items]:
        out.append(Violation("diagonal", detail=f"dist({u},{u})={d[u, u]} != 0"))

    asym = np.argwhere(d != d.T)
    count = 0
    for u, v in asym:
        if u < v:
            out.append(
                Violation(
                    "asymmetry",
                    detail=f"dist({u},{v})={d[u, v]} != dist({v},{u})={d[v, u]}",
                )
            )
            count += 1
            if count >= max_items:
                break

    # One min-plus pass finds every pair with a shorter two-leg detour.
    best = d.copy()
    via = np.zeros((n, n), dtype=np.int64)
    for w in range(n):
        cand = d[:, w : w + 1] + d[w : w + 1, :]
        mask = cand < best
        best[mask] = cand[mask]
        via[mask] = w
    count = 0
    for u, v in np.argwhere(best < d):
        w = via[u, v]
        out.append(
            Violation(
                "triangle",
                detail=(
                    f"dist({u},{w})+dist({w},{v})={best[u, v]} < dist({u},{v})={d[u, v]}"
                ),
            )
        )
        count += 1
        if count >= max_items:
            break
    return sort_violations(out)


def _all_pairs_shortest(d: np.ndarray) -> np.ndarray:
    out = d.copy()
    for w in range(out.shape[0]):
        np.minimum(out, out[:, w : w + 1] + out[w : w + 1, :], out=out)
    return out


def random_restricted_ktc(seed: int, n: int, k: int, wmax: int) -> KTCInstance:
    """Deterministic restricted instance from rounded grid-point distances.

    Integer points are sampled on a square grid with a seeded generator,
    depot legs are clamped into [1, wmax], and the matrix is re-closed
    under the triangle inequality by all-pairs shortest paths (which keeps
    the depot legs inside the clamp window).
    """
    if n < 2:
        raise ValueError(f"need at least 2 vertices, got n={n}")
    if k < 3:
        raise ValueError(f"tour capacity k must be >= 3, got {k}")
    if wmax < 1:
        raise ValueError(f"wmax must be >= 1, got {wmax}")
    rng = np.random.default_rng(seed)
    span = 4 * wmax
    pts = rng.integers(0, span + 1, size=(n, 2))
    diff = pts[:, None, :] - pts[None, :, :]
    d = np.rint(np.sqrt((diff.astype(np.float64) ** 2).sum(axis=2))).astype(np.int64)
    depot = 0
    legs = np.clip(d[depot], 1, wmax)
    legs[depot] = 0
    d[depot, :] = legs
    d[:, depot] = legs
    d = _all_pairs_shortest(d)
    return KTCInstance(MetricInstance(d), depot=depot, k=k, restricted=True, wmax=wmax)


# --- KTC v1 text format ---------------------------------------------------


def instance_to_text(inst: KTCInstance) -> str:
    lines = ["KTC 1"]
    lines.append(
        f"n={inst.n} k={inst.k} depot={inst.depot + 1} "
        f"restricted={1 if inst.restricted else 0} wmax={inst.wmax}"
    )
    for row in inst.dist:
        lines.append(" ".join(str(int(x)) for x in row))
    return "\n".join(lines) + "\n"


def save_instance(inst: KTCInstance, path) -> None:
    Path(path).write_text(instance_to_text(inst))


def instance_from_text(text: str) -> KTCInstance:
    lines = [ln.rstrip("\n") for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != "KTC 1":
        raise FormatError("missing 'KTC 1' header")
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
            raise FormatError(f"non-integer value for {key!r}: {val!r}") from None
    for key in ("n", "k", "depot", "restricted", "wmax"):
        if key not in params:
            raise FormatError(f"parameter line is missing {key!r}")
    n = params["n"]
    rows = lines[2:]
    if len(rows) != n:
        raise FormatError(f"expected {n} matrix rows, found {len(rows)}")
    try:
        mat = [[int(x) for x in row.split()] for row in rows]
    except ValueError:
        raise FormatError("non-integer distance entry") from None
    if any(len(r) != n for r in mat):
        raise FormatError(f"matrix rows must each have {n} entries")
    metric = MetricInstance(np.array(mat, dtype=np.int64))
    problems = check_metric(metric)
    if problems:
        raise MetricViolationError(str(problems[0]))
    return KTCInstance(
        metric,
        depot=params["depot"] - 1,
        k=params["k"],
        restricted=bool(params["restricted"]),
        wmax=params["wmax"],
    )


def load_instance(path) -> KTCInstance:
    return instance_from_text(Path(path).read_text())

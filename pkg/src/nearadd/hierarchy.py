"""Sampled level hierarchies, pivots and (half-)bunches.

Levels ``A_0 = V ⊇ A_1 ⊇ ... ⊇ A_k = ∅`` are stored as ``level_of[v]``, the
highest ``i`` with ``v ∈ A_i``.  Sampling uses numpy's PCG64 generator with
one independent stream per level, seeded from ``SeedSequence([seed, i])``.
"""
from __future__ import annotations

import enum
import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import ParameterError
from .graph import INF, Graph, multi_source_dijkstra

PRNG_ALGORITHM = "PCG64"
_SEED_MASK = (1 << 64) - 1


class Schedule(str, enum.Enum):
    EMULATOR = "emulator"
    SPANNER = "spanner"


def nu_for(schedule: Schedule, k: int) -> float:
    if schedule is Schedule.EMULATOR:
        return 1.0 / (2**k - 1)
    return 1.0 / ((4.0 / 3.0) ** k - 1.0)


def level_probability(schedule: Schedule, n: int, k: int, i: int) -> float:
    """Probability that a level-``i`` vertex is promoted to level ``i+1``."""
    nu = nu_for(schedule, k)
    if schedule is Schedule.EMULATOR:
        return n ** (-(2**i) * nu) * 2.0 ** (-(2**i) - 1)
    expo = 4**i / 3 ** (i + 1)
    return n ** (-expo * nu) * 2.0 ** (-expo - 1)


def expected_level_size(schedule: Schedule, n: int, k: int, i: int) -> float:
    return n * math.prod(level_probability(schedule, n, k, j) for j in range(i))


@dataclass(frozen=True)
class LevelHierarchy:
    k: int
    level_of: tuple[int, ...]
    schedule: Schedule
    nu: float
    seed: int

    @property
    def n(self) -> int:
        return len(self.level_of)

    def members(self, i: int) -> list[int]:
        """Sorted vertex ids of ``A_i``."""
        return [v for v, lv in enumerate(self.level_of) if lv >= i]

    def sizes(self) -> list[int]:
        return [sum(1 for lv in self.level_of if lv >= i) for i in range(self.k)]


def sample_levels(n: int, k: int, schedule: Schedule | str, seed: int) -> LevelHierarchy:
    schedule = Schedule(schedule)
    if k < 1:
        raise ParameterError(f"k must be >= 1 (got {k})")
    if n < 1:
        raise ParameterError(f"n must be >= 1 (got {n})")
    level = [0] * n
    current = list(range(n))
    for i in range(k - 1):
        if not current:
            break
        q = level_probability(schedule, n, k, i)
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed & _SEED_MASK, i])))
        draws = rng.random(len(current))
        current = [v for v, x in zip(current, draws) if x < q]
        for v in current:
            level[v] = i + 1
    return LevelHierarchy(k, tuple(level), schedule, nu_for(schedule, k), seed)


@dataclass
class PivotTable:
    """Nearest level-``i`` vertex per vertex, indexed ``[level][vertex]``.

    ``parent[i]`` is the multi-source shortest-path forest toward ``A_i``;
    following it from v ends at ``pivot[i][v]``.
    """

    pivot: list[list[int | None]]
    pivot_dist: list[list[float]]
    parent: list[list[int | None]]

    def path_to_pivot(self, v: int, i: int) -> list[int]:
        path = [v]
        par = self.parent[i]
        while path[-1] != self.pivot[i][v]:
            nxt = par[path[-1]]
            assert nxt is not None
            path.append(nxt)
        return path


def compute_pivots(g: Graph, h: LevelHierarchy) -> PivotTable:
    if h.n != g.n:
        raise ParameterError("hierarchy and graph disagree on vertex count")
    pivot, pdist, parent = [], [], []
    for i in range(h.k):
        dist, origin, par = multi_source_dijkstra(g, h.members(i))
        pivot.append(origin)
        pdist.append(dist)
        parent.append(par)
    return PivotTable(pivot, pdist, parent)


class EntryKind(str, enum.Enum):
    MEMBER = "bunch-member"
    PIVOT = "pivot"


@dataclass(frozen=True)
class BunchEntry:
    v: int
    d: float
    kind: EntryKind


@dataclass
class BunchMap:
    """Per-vertex bunch lists plus the cluster trees that produced them.

    ``clusters[w]`` maps every vertex retained by the truncated search from
    ``w`` to its tree parent (``None`` at ``w``); walking parents from u
    yields a shortest u-w path.
    """

    entries: list[list[BunchEntry]]
    radius_fraction: Fraction
    clusters: dict[int, dict[int, int | None]] = field(default_factory=dict)
    cluster_dist: dict[int, dict[int, float]] = field(default_factory=dict)

    def members(self, u: int) -> list[int]:
        return [e.v for e in self.entries[u] if e.kind is EntryKind.MEMBER]

    def vertices(self, u: int) -> set[int]:
        return {e.v for e in self.entries[u]}

    def cluster_path(self, u: int, w: int) -> list[int]:
        """Tree path u -> w inside the cluster of ``w``."""
        tree = self.clusters[w]
        path = [u]
        while path[-1] != w:
            p = tree[path[-1]]
            assert p is not None
            path.append(p)
        return path

    def total_size(self) -> int:
        return sum(len(e) for e in self.entries)


def _next_level_dist(p: PivotTable, k: int, i: int) -> list[float] | None:
    """``d(·, A_{i+1})`` or None when the threshold is infinite everywhere."""
    if i + 1 >= k:
        return None
    return p.pivot_dist[i + 1]


def _grow_cluster(
    g: Graph, w: int, r: Fraction, limit: list[float] | None
) -> tuple[dict[int, int | None], dict[int, float]]:
    """Truncated Dijkstra from ``w`` keeping x only while d(w,x) < r·limit[x]."""

    def keep(x: int, d: float) -> bool:
        if limit is None:
            return d < INF
        lx = limit[x]
        if lx == INF:
            return d < INF
        # r is 1 or 1/2: compare without rounding
        return d * r.denominator < lx * r.numerator

    if not keep(w, 0.0):
        return {}, {}
    dist: dict[int, float] = {w: 0.0}
    parent: dict[int, int | None] = {w: None}
    done: set[int] = set()
    heap = [(0.0, w)]
    adj = g.adj
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for x, wt in adj[u]:
            if x in done:
                continue
            nd = d + wt
            dx = dist.get(x, INF)
            if nd < dx:
                if not keep(x, nd):
                    continue
                dist[x] = nd
                parent[x] = u
                heapq.heappush(heap, (nd, x))
            elif nd == dx and u < parent[x]:  # type: ignore[operator]
                parent[x] = u
    return parent, dist


def compute_bunches(
    g: Graph, h: LevelHierarchy, p: PivotTable, radius_fraction: Fraction | float | int = 1
) -> BunchMap:
    """Bunches ``B(u)`` (radius 1) or half-bunches ``B_{1/2}(u)`` (radius 1/2).

    A vertex u at top level i gets every ``v ∈ A_i \\ {u}`` with
    ``d(u, v) < r · d(u, A_{i+1})`` as a member, then its pivots
    ``p_j(u)`` for ``i < j < k``.  Members are found from the other side:
    each ``w`` at top level i grows a cluster by truncated Dijkstra, which is
    exact because the membership condition is inherited by every vertex on a
    shortest path into the cluster.  Centres in ``A_{i+1}`` have empty
    clusters at level i, so only top-level-i centres are grown.
    """
    r = Fraction(repr(radius_fraction)) if isinstance(radius_fraction, float) else Fraction(radius_fraction)
    if r not in (Fraction(1), Fraction(1, 2)):
        raise ParameterError("radius_fraction must be 1 or 1/2")
    n, k = g.n, h.k
    level = h.level_of
    members: list[list[BunchEntry]] = [[] for _ in range(n)]
    clusters: dict[int, dict[int, int | None]] = {}
    cdist: dict[int, dict[int, float]] = {}
    for w in range(n):
        i = level[w]
        parent, dist = _grow_cluster(g, w, r, _next_level_dist(p, k, i))
        clusters[w] = parent
        cdist[w] = dist
        for x, d in dist.items():
            if x != w and level[x] == i:
                members[x].append(BunchEntry(w, d, EntryKind.MEMBER))
    entries: list[list[BunchEntry]] = []
    for u in range(n):
        row = sorted(members[u], key=lambda e: e.v)
        seen = {e.v for e in row}
        for j in range(level[u] + 1, k):
            pv = p.pivot[j][u]
            if pv is not None and pv not in seen:
                seen.add(pv)
                row.append(BunchEntry(pv, p.pivot_dist[j][u], EntryKind.PIVOT))
        entries.append(row)
    return BunchMap(entries, r, clusters, cdist)


def bunch_stats(h: LevelHierarchy, b: BunchMap) -> dict:
    """Per-level sizes and mean bunch sizes (JSON-ready)."""
    k = h.k
    per_level: list[list[int]] = [[] for _ in range(k)]
    for u, row in enumerate(b.entries):
        per_level[h.level_of[u]].append(len(row))
    return {
        "n": h.n,
        "k": k,
        "schedule": h.schedule.value,
        "seed": h.seed,
        "nu": h.nu,
        "prng": PRNG_ALGORITHM,
        "radius_fraction": str(b.radius_fraction),
        "level_sizes": h.sizes(),
        "expected_level_sizes": [expected_level_size(h.schedule, h.n, k, i) for i in range(k)],
        "mean_bunch_size": [(sum(s) / len(s)) if s else 0.0 for s in per_level],
        "total_bunch_entries": b.total_size(),
    }


def brute_force_bunches(
    dist: "np.ndarray | list[list[float]]", h: LevelHierarchy, radius_fraction: Fraction | float = 1
) -> list[set[int]]:
    """Bunch vertex sets straight from the definition, given exact APSP."""
    r = float(radius_fraction)
    n, k = h.n, h.k
    out: list[set[int]] = []
    levels: list[list[int]] = [h.members(i) for i in range(k + 1)]
    for u in range(n):
        i = h.level_of[u]
        nxt = levels[i + 1] if i + 1 < k else []
        thr = min((dist[u][a] for a in nxt), default=INF)
        s = {v for v in levels[i] if v != u and dist[u][v] < INF and dist[u][v] < r * thr}
        for j in range(i + 1, k):
            cands = [(dist[u][a], a) for a in levels[j] if dist[u][a] < INF]
            if cands:
                s.add(min(cands)[1])
        out.append(s)
    return out


def iter_top_level(h: LevelHierarchy, i: int) -> Iterable[int]:
    return (v for v, lv in enumerate(h.level_of) if lv == i)

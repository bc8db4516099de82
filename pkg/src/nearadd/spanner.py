"""Subgraph spanners from half-bunch shortest paths."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .emulator import OverlayEdgeSet, OverlayKind
from .errors import ParameterError
from .graph import Graph
from .hierarchy import (
    BunchMap,
    EntryKind,
    LevelHierarchy,
    PivotTable,
    Schedule,
    compute_bunches,
    compute_pivots,
    sample_levels,
)


@dataclass
class SpannerBuildReport:
    spanner: OverlayEdgeSet
    paths_added: int
    intersections_per_level: list[int]
    edges_per_level: list[int]
    hierarchy: LevelHierarchy = field(repr=False)
    pivots: PivotTable = field(repr=False)
    bunches: BunchMap = field(repr=False)

    def summary(self) -> dict:
        return {
            "kind": "spanner",
            "n": self.spanner.n,
            "edges": len(self.spanner),
            "paths_added": self.paths_added,
            "intersections_per_level": self.intersections_per_level,
            "edges_per_level": self.edges_per_level,
            "level_sizes": self.hierarchy.sizes(),
            **self.spanner.params,
        }


def half_bunch_paths(
    h: LevelHierarchy, piv: PivotTable, b: BunchMap
) -> list[tuple[int, int, int, list[int]]]:
    """All ``(level, u, v, P_uv)`` for ``v ∈ B_{1/2}(u)``, ``P_uv`` running u -> v.

    Member paths come from the cluster tree of v; pivot paths from the
    pivot forest of the matching level.
    """
    out = []
    for u, row in enumerate(b.entries):
        i = h.level_of[u]
        for e in row:
            if e.kind is EntryKind.MEMBER:
                path = b.cluster_path(u, e.v)
            else:
                j = next(j for j in range(i + 1, h.k) if piv.pivot[j][u] == e.v)
                path = piv.path_to_pivot(u, j)
            out.append((i, u, e.v, path))
    return out


def _count_intersections(paths: list[list[int]]) -> int:
    """Number of distinct path pairs sharing at least one vertex."""
    through: dict[int, list[int]] = {}
    for pid, p in enumerate(paths):
        for x in p:
            through.setdefault(x, []).append(pid)
    pairs: set[int] = set()
    stride = len(paths)
    for ids in through.values():
        for a, c in combinations(ids, 2):
            pairs.add(a * stride + c)
    return len(pairs)


def build_spanner(g: Graph, k: int, seed: int, count_intersections: bool = True) -> SpannerBuildReport:
    """Union of shortest paths P_uv over all u and v ∈ B_{1/2}(u)."""
    if k < 1:
        raise ParameterError(f"k must be >= 1 (got {k})")
    h = sample_levels(g.n, k, Schedule.SPANNER, seed)
    piv = compute_pivots(g, h)
    b = compute_bunches(g, h, piv, 0.5)
    paths = half_bunch_paths(h, piv, b)

    chosen: dict[tuple[int, int], float] = {}
    level_edges: list[set[tuple[int, int]]] = [set() for _ in range(k)]
    level_paths: list[list[list[int]]] = [[] for _ in range(k)]
    added = 0
    for i, _u, _v, path in paths:
        if len(path) < 2:
            continue
        added += 1
        level_paths[i].append(path)
        for a, c in zip(path, path[1:]):
            key = (a, c) if a < c else (c, a)
            level_edges[i].add(key)
            if key not in chosen:
                w = g.weight(a, c)
                assert w is not None
                chosen[key] = w
    edges = tuple((a, c, w) for (a, c), w in sorted(chosen.items()))
    params = {"k": k, "seed": seed, "schedule": Schedule.SPANNER.value}
    spanner = OverlayEdgeSet(g.n, edges, OverlayKind.SPANNER, params)
    inter = [_count_intersections(p) if count_intersections else -1 for p in level_paths]
    return SpannerBuildReport(
        spanner, added, inter, [len(s) for s in level_edges], h, piv, b
    )


@dataclass(frozen=True)
class IntersectionViolation:
    level: int
    first: tuple[int, int]
    second: tuple[int, int]
    shared: int


def check_intersection_lemma(g: Graph, h: LevelHierarchy, bunches: BunchMap) -> list[IntersectionViolation]:
    """Scan same-level member path pairs that share a vertex.

    Each such pair ``P_uv, P_xy`` must have all four endpoints in
    ``{u} ∪ B(u)`` or in ``{x} ∪ B(x)``, with full (radius 1) bunches
    recomputed here.  Returns the counterexamples.
    """
    piv = compute_pivots(g, h)
    full = compute_bunches(g, h, piv, 1)
    closed = [set(full.members(u)) | {u} for u in range(g.n)]

    by_level: dict[int, list[tuple[int, int, list[int]]]] = {}
    for u, row in enumerate(bunches.entries):
        for e in row:
            if e.kind is EntryKind.MEMBER:
                by_level.setdefault(h.level_of[u], []).append((u, e.v, bunches.cluster_path(u, e.v)))

    bad = []
    for level, paths in sorted(by_level.items()):
        through: dict[int, list[int]] = {}
        for pid, (_, _, p) in enumerate(paths):
            for x in p:
                through.setdefault(x, []).append(pid)
        seen: set[tuple[int, int]] = set()
        for z, ids in sorted(through.items()):
            for a, c in combinations(ids, 2):
                if (a, c) in seen:
                    continue
                seen.add((a, c))
                u, v, _ = paths[a]
                x, y, _ = paths[c]
                four = {u, v, x, y}
                if not (four <= closed[u] or four <= closed[x]):
                    bad.append(IntersectionViolation(level, (u, v), (x, y), z))
    return bad

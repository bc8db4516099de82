"""Purely additive all-pairs estimates for weighted graphs.

Vertices are split into degree classes with thresholds
``s_i = (m/n)^(1 - i/k)``.  Each class gets a greedy hitting set ``D_i`` of
its light-neighbour sets, and each level sweeps Dijkstra from every vertex
of ``D_i`` over the light-edge subgraph ``E_i`` plus virtual edges
carrying the current estimates.  Every estimate is realised by a walk in G,
and ``est(u, v) <= d(u, v) + 2(k-1)·W(u, v)``.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Iterable, MutableSequence, Sequence

import numpy as np

from .errors import ParameterError
from .graph import INF, Graph


def greedy_hitting_set(universe_size: int, sets: Sequence[Iterable[int]]) -> list[int]:
    """Greedy hitting set: repeatedly take the element in the most unhit sets.

    Ties go to the smaller id.  Returns the chosen ids sorted.
    """
    fam = [frozenset(s) for s in sets]
    containing: dict[int, list[int]] = {}
    for idx, s in enumerate(fam):
        if not s:
            raise ParameterError(f"set #{idx} is empty and cannot be hit")
        for x in s:
            if not 0 <= x < universe_size:
                raise ParameterError(f"element {x} outside universe of size {universe_size}")
            containing.setdefault(x, []).append(idx)
    count = {x: len(ids) for x, ids in containing.items()}
    heap = [(-c, x) for x, c in count.items()]
    heapq.heapify(heap)
    hit = [False] * len(fam)
    remaining = len(fam)
    chosen = []
    while remaining:
        negc, x = heapq.heappop(heap)
        if -negc != count[x]:
            heapq.heappush(heap, (-count[x], x))
            continue
        chosen.append(x)
        for idx in containing[x]:
            if hit[idx]:
                continue
            hit[idx] = True
            remaining -= 1
            for y in fam[idx]:
                count[y] -= 1
        count[x] = 0
    return sorted(chosen)


def light_neighbors(g: Graph, u: int, s: float) -> list[int]:
    """Neighbours on the ``ceil(s)`` lightest edges at u, ties by neighbour id."""
    if s <= 0:
        return []
    ranked = sorted(g.adj[u], key=lambda vw: (vw[1], vw[0]))
    return [v for v, _ in ranked[: math.ceil(s)]]


def estimate_dijkstra(
    n: int,
    edges: Sequence[tuple[int, int]],
    delta: MutableSequence[MutableSequence[float]],
    u: int,
) -> None:
    """Dijkstra from u over ``edges ∪ ({u} × V)``, weights read from ``delta``.

    Virtual edge (u, x) weighs ``delta[u][x]``; a real edge (a, b) weighs
    ``delta[a][b]``.  Row and column u of ``delta`` are lowered in place to
    the computed distances where those are smaller.
    """
    adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for a, b in edges:
        w = delta[a][b]
        if w < INF:
            adj[a].append((b, w))
            adj[b].append((a, w))
    row = delta[u]
    dist = [float(x) for x in row]
    dist[u] = 0.0
    heap = [(d, x) for x, d in enumerate(dist) if d < INF]
    heapq.heapify(heap)
    done = [False] * n
    while heap:
        d, x = heapq.heappop(heap)
        if done[x] or d > dist[x]:
            continue
        done[x] = True
        for y, w in adj[x]:
            nd = d + w
            if nd < dist[y]:
                dist[y] = nd
                heapq.heappush(heap, (nd, y))
    for x in range(n):
        if dist[x] < delta[u][x]:
            delta[u][x] = dist[x]
            delta[x][u] = dist[x]


@dataclass
class DistanceEstimateTable:
    n: int
    delta_hat: np.ndarray
    k: int
    thresholds: list[float]
    degree_classes: list[list[int]]
    hitting_sets: list[list[int]]
    edge_sets: list[list[tuple[int, int]]]
    snapshots: list[np.ndarray] = field(default_factory=list, repr=False)

    def metadata(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "s": self.thresholds,
            "A_sizes": [len(a) for a in self.degree_classes],
            "D_sizes": [len(d) for d in self.hitting_sets],
            "E_sizes": [len(e) for e in self.edge_sets],
        }


def max_k(n: int) -> int:
    return math.ceil(math.log2(max(n, 2))) + 1


def additive_apsp(g: Graph, k: int, keep_snapshots: bool = False) -> DistanceEstimateTable:
    """Additive APSP estimates with error at most ``2(k-1)·W(u, v)``.

    Index conventions, all 1-based in level: ``thresholds[i-1] = s_i``,
    ``hitting_sets[i-1] = D_i`` and ``edge_sets[i-1] = E_i`` for
    ``i = 1..k``; ``degree_classes`` holds ``A_1..A_{k-1}``.
    ``snapshots[i-1]`` (optional) is the table after sweep i.
    """
    n, m = g.n, g.m
    if m < 1:
        raise ParameterError("graph must have at least one edge")
    if not 2 <= k <= max_k(n):
        raise ParameterError(f"k must satisfy 2 <= k <= ceil(log2 n) + 1 = {max_k(n)} (got {k})")

    all_edges = [(u, v) for u, v, _ in g.edges]
    thresholds: list[float] = []
    classes: list[list[int]] = []
    hitting: list[list[int]] = []
    edge_sets: list[list[tuple[int, int]]] = [all_edges]
    for i in range(1, k):
        s = (m / n) ** (1 - i / k)
        heavy = [v for v in range(n) if g.degree(v) >= s]
        light = [light_neighbors(g, v, s) for v in range(n)]
        thresholds.append(s)
        classes.append(heavy)
        hitting.append(greedy_hitting_set(n, [light[v] for v in heavy]))
        keep = {(min(u, v), max(u, v)) for u in range(n) for v in light[u]}
        edge_sets.append(sorted(keep))
    thresholds.append(1.0)
    hitting.append(list(range(n)))

    delta = [[INF] * n for _ in range(n)]
    for u in range(n):
        delta[u][u] = 0.0
    for u, v, w in g.edges:
        delta[u][v] = w
        delta[v][u] = w

    snapshots = []
    for i in range(1, k + 1):
        for u in hitting[i - 1]:
            estimate_dijkstra(n, edge_sets[i - 1], delta, u)
        if keep_snapshots:
            snapshots.append(np.array(delta))
    return DistanceEstimateTable(
        n, np.array(delta), k, thresholds, classes, hitting, edge_sets, snapshots
    )

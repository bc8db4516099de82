"""Weighted undirected graphs and exact single-source routines.

All routines break ties deterministically: among equal-distance frontier
vertices the smaller id is settled first, and among equal-distance parents
the smaller parent id wins.  Distances use ``math.inf`` for unreachable
vertices.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import NoPathError, ParseError

INF = math.inf

Edge = tuple[int, int, float]


class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``.

    Parallel edges collapse to their minimum weight and self-loops are
    dropped.  ``edges`` holds each edge once as ``(u, v, w)`` with ``u < v``,
    sorted; ``adj[u]`` lists ``(v, w)`` sorted by neighbour id.
    """

    __slots__ = ("n", "edges", "adj", "_weight")

    def __init__(self, n: int, edges: Iterable[tuple[int, int, float]]):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        best: dict[tuple[int, int], float] = {}
        for u, v, w in edges:
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if w < 0 or math.isnan(w):
                raise ValueError(f"edge ({u}, {v}) has invalid weight {w}")
            if u == v:
                continue
            key = (u, v) if u < v else (v, u)
            if key not in best or w < best[key]:
                best[key] = w
        self.n = n
        self.edges: tuple[Edge, ...] = tuple((u, v, w) for (u, v), w in sorted(best.items()))
        adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        for u, v, w in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        self.adj: tuple[tuple[tuple[int, float], ...], ...] = tuple(
            tuple(sorted(a)) for a in adj
        )
        self._weight = best

    @property
    def m(self) -> int:
        return len(self.edges)

    def weight(self, u: int, v: int) -> float | None:
        """Weight of edge ``{u, v}``, or None when absent."""
        return self._weight.get((u, v) if u < v else (v, u))

    def degree(self, u: int) -> int:
        return len(self.adj[u])

    def max_weight(self) -> float:
        return max((w for _, _, w in self.edges), default=0.0)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def load_graph(stream: IO[str] | Iterable[str]) -> Graph:
    """Parse ``.gr`` text: ``p sp <n> <m>`` header, ``c`` comments, ``a u v w`` arcs.

    Vertex ids are 0-based.  Raises :class:`ParseError` naming the line.
    """
    n: int | None = None
    edges: list[Edge] = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        tok = line.split()
        if tok[0] == "p":
            if n is not None:
                raise ParseError(lineno, "duplicate header")
            if len(tok) != 4 or tok[1] != "sp":
                raise ParseError(lineno, "expected 'p sp <n> <m>'")
            try:
                n, m = int(tok[2]), int(tok[3])
            except ValueError:
                raise ParseError(lineno, "non-integer size in header") from None
            if n < 0 or m < 0:
                raise ParseError(lineno, "negative size in header")
        elif tok[0] == "a":
            if n is None:
                raise ParseError(lineno, "arc before header")
            if len(tok) != 4:
                raise ParseError(lineno, "expected 'a <u> <v> <w>'")
            try:
                u, v, w = int(tok[1]), int(tok[2]), float(tok[3])
            except ValueError:
                raise ParseError(lineno, "malformed arc") from None
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(lineno, f"vertex id out of range for n={n}")
            if w < 0 or math.isnan(w) or math.isinf(w):
                raise ParseError(lineno, f"invalid weight {tok[3]}")
            edges.append((u, v, w))
        else:
            raise ParseError(lineno, f"unknown line type {tok[0]!r}")
    if n is None:
        raise ParseError(0, "missing header")
    return Graph(n, edges)


def format_weight(w: float) -> str:
    return str(int(w)) if float(w).is_integer() else repr(float(w))


def write_gr(stream: IO[str], n: int, edges: Sequence[Edge], comments: Sequence[str] = ()) -> None:
    for c in comments:
        stream.write(f"c {c}\n")
    stream.write(f"p sp {n} {len(edges)}\n")
    for u, v, w in edges:
        stream.write(f"a {u} {v} {format_weight(w)}\n")


@dataclass
class SsspResult:
    source: int
    dist: list[float]
    parent: list[int | None]
    bottleneck: list[float]


@dataclass
class HopBoundedResult:
    source: int
    dist: list[float]
    hops_used: list[int]
    relaxations: int
    rounds_run: int


def _check_source(g: Graph, source: int) -> None:
    if not 0 <= source < g.n:
        raise ValueError(f"source {source} out of range for n={g.n}")


def dijkstra(g: Graph, source: int) -> SsspResult:
    _check_source(g, source)
    n = g.n
    dist = [INF] * n
    parent: list[int | None] = [None] * n
    bott = [0.0] * n
    done = [False] * n
    dist[source] = 0.0
    heap = [(0.0, source)]
    adj = g.adj
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        bu = bott[u]
        for v, w in adj[u]:
            if done[v]:
                continue
            nd = d + w
            dv = dist[v]
            if nd < dv:
                dist[v] = nd
                parent[v] = u
                bott[v] = w if w > bu else bu
                heapq.heappush(heap, (nd, v))
            elif nd == dv and u < parent[v]:  # type: ignore[operator]
                parent[v] = u
                bott[v] = w if w > bu else bu
    return SsspResult(source, dist, parent, bott)


def dijkstra_min_bottleneck(g: Graph, source: int) -> SsspResult:
    """Dijkstra over lexicographic ``(dist, bottleneck)`` labels.

    Among all shortest source-v paths, the returned one minimises the
    heaviest edge; ``bottleneck[v]`` is that weight (0 at the source).
    """
    _check_source(g, source)
    n = g.n
    dist = [INF] * n
    bott = [INF] * n
    parent: list[int | None] = [None] * n
    done = [False] * n
    dist[source] = 0.0
    bott[source] = 0.0
    heap = [(0.0, 0.0, source)]
    adj = g.adj
    while heap:
        d, b, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for v, w in adj[u]:
            if done[v]:
                continue
            nd = d + w
            nb = w if w > b else b
            dv, bv = dist[v], bott[v]
            if nd < dv or (nd == dv and nb < bv):
                dist[v] = nd
                bott[v] = nb
                parent[v] = u
                heapq.heappush(heap, (nd, nb, v))
            elif nd == dv and nb == bv and u < parent[v]:  # type: ignore[operator]
                parent[v] = u
    for v in range(n):
        if dist[v] == INF:
            bott[v] = INF
    return SsspResult(source, dist, parent, bott)


def multi_source_dijkstra(
    g: Graph, sources: Iterable[int]
) -> tuple[list[float], list[int | None], list[int | None]]:
    """Distance to the nearest source, ties by smaller source id.

    Returns ``(dist, origin, parent)``; following ``parent`` from v walks a
    shortest path to ``origin[v]``.
    """
    n = g.n
    dist = [INF] * n
    origin: list[int | None] = [None] * n
    parent: list[int | None] = [None] * n
    done = [False] * n
    heap = []
    for s in sorted(set(sources)):
        dist[s] = 0.0
        origin[s] = s
        heap.append((0.0, s, s))
    heapq.heapify(heap)
    adj = g.adj
    while heap:
        d, o, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for v, w in adj[u]:
            if done[v]:
                continue
            nd = d + w
            dv = dist[v]
            if nd < dv or (nd == dv and o < origin[v]):  # type: ignore[operator]
                dist[v] = nd
                origin[v] = o
                parent[v] = u
                heapq.heappush(heap, (nd, o, v))
            elif nd == dv and o == origin[v] and u < parent[v]:  # type: ignore[operator]
                parent[v] = u
    return dist, origin, parent


def bellman_ford_bounded(g: Graph, source: int, rounds: int) -> HopBoundedResult:
    """Hop-bounded distances: after round t, ``dist[v]`` is the lightest
    source-v path with at most t edges.

    Rounds are synchronous (each reads the previous round's labels).  One
    relaxation is one undirected edge examined in one round.  Iteration stops
    early once a round changes nothing, since later rounds cannot either.
    """
    if rounds < 0:
        raise ValueError("rounds must be nonnegative")
    _check_source(g, source)
    n = g.n
    dist = [INF] * n
    hops = [0] * n
    dist[source] = 0.0
    relaxations = 0
    run = 0
    edges = g.edges
    for t in range(1, rounds + 1):
        new = dist[:]
        changed = False
        for u, v, w in edges:
            du, dv = dist[u], dist[v]
            if du + w < new[v]:
                new[v] = du + w
                hops[v] = t
                changed = True
            if dv + w < new[u]:
                new[u] = dv + w
                hops[u] = t
                changed = True
        relaxations += len(edges)
        run = t
        dist = new
        if not changed:
            break
    return HopBoundedResult(source, dist, hops, relaxations, run)


def bellman_ford_bounded_many(
    n: int,
    edges: Sequence[Edge] | np.ndarray,
    sources: Sequence[int],
    rounds: int,
    chunk_elems: int = 1 << 23,
) -> np.ndarray:
    """Vectorised :func:`bellman_ford_bounded` for many sources at once.

    ``edges`` may contain parallel pairs; the minimum is taken implicitly.
    Returns a ``len(sources) x n`` float array.
    """
    sources = list(sources)
    out = np.full((len(sources), n), np.inf)
    if not sources:
        return out
    e = np.asarray(edges, dtype=float).reshape(-1, 3)
    src = np.concatenate([e[:, 0], e[:, 1]]).astype(np.intp)
    dst = np.concatenate([e[:, 1], e[:, 0]]).astype(np.intp)
    wt = np.concatenate([e[:, 2], e[:, 2]])
    order = np.argsort(dst, kind="stable")
    src, dst, wt = src[order], dst[order], wt[order]
    targets, starts = np.unique(dst, return_index=True)
    step = max(1, chunk_elems // max(1, len(src)))
    for lo in range(0, len(sources), step):
        block = sources[lo:lo + step]
        d = np.full((len(block), n), np.inf)
        d[np.arange(len(block)), block] = 0.0
        for _ in range(rounds):
            if len(src) == 0:
                break
            cand = np.minimum.reduceat(d[:, src] + wt, starts, axis=1)
            cur = d[:, targets]
            better = cand < cur
            if not better.any():
                break
            d[:, targets] = np.where(better, cand, cur)
        out[lo:lo + len(block)] = d
    return out


def extract_path(r: SsspResult, target: int) -> list[int]:
    """Source-to-target vertex list along parent links."""
    if r.dist[target] == INF:
        raise NoPathError(f"vertex {target} unreachable from {r.source}")
    path = [target]
    while path[-1] != r.source:
        p = r.parent[path[-1]]
        assert p is not None
        path.append(p)
    path.reverse()
    return path


def path_weight(g: Graph, path: Sequence[int]) -> float:
    """Total weight of a vertex walk; raises KeyError on a non-edge step."""
    total = 0.0
    for a, b in zip(path, path[1:]):
        w = g.weight(a, b)
        if w is None:
            raise KeyError(f"({a}, {b}) is not an edge")
        total += w
    return total


def connected_components(g: Graph) -> list[int]:
    """Component label per vertex (smallest vertex id in the component)."""
    label = [-1] * g.n
    for s in range(g.n):
        if label[s] != -1:
            continue
        label[s] = s
        stack = [s]
        while stack:
            u = stack.pop()
            for v, _ in g.adj[u]:
                if label[v] == -1:
                    label[v] = s
                    stack.append(v)
    return label


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or all(c == 0 for c in connected_components(g))

"""Approximate shortest paths from source sets, and a preprocess/query oracle."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .emulator import (
    BetaVariant,
    OverlayEdgeSet,
    as_hopset,
    beta_bound,
    build_emulator,
    dedupe_edges,
)
from .errors import NoPathError, ParameterError
from .graph import INF, Graph, HopBoundedResult, SsspResult, bellman_ford_bounded, dijkstra, extract_path
from .spanner import SpannerBuildReport, build_spanner


@dataclass
class AspResult:
    sources: list[int]
    trees: dict[int, SsspResult]
    spanner: SpannerBuildReport = field(repr=False)
    k: int
    eps: float
    seed: int
    beta: float

    def estimate(self, s: int, v: int) -> float:
        return self.trees[s].dist[v]

    def path(self, s: int, v: int) -> list[int]:
        """Reported s-v path; its G-weight equals ``estimate(s, v)``."""
        return extract_path(self.trees[s], v)


def _validate_sources(n: int, sources: Iterable[int]) -> list[int]:
    src = sorted(set(int(s) for s in sources))
    if not src:
        raise ParameterError("source set must be nonempty")
    for s in src:
        if not 0 <= s < n:
            raise ParameterError(f"source {s} out of range for n={n}")
    return src


def asp_all(g: Graph, sources: Iterable[int], k: int, eps: float, seed: int) -> AspResult:
    """(1+eps, beta·W)-approximate shortest paths for sources × V.

    Builds the spanner once and runs Dijkstra inside it from each source, so
    every reported path is a path of G.
    """
    bp = beta_bound(BetaVariant.SPAN_1EPS, k, eps)
    src = _validate_sources(g.n, sources)
    report = build_spanner(g, k, seed, count_intersections=False)
    h = report.spanner.to_graph()
    trees = {s: dijkstra(h, s) for s in src}
    return AspResult(src, trees, report, k, eps, seed, bp.beta)


def asp_rows(res: AspResult, with_paths: bool = False) -> Iterable[tuple]:
    """``(source, target, estimate[, path])`` rows for finite estimates."""
    for s in res.sources:
        t = res.trees[s]
        for v, d in enumerate(t.dist):
            if d == INF:
                continue
            if with_paths:
                yield s, v, d, res.path(s, v)
            else:
                yield s, v, d


@dataclass
class DistanceOraclePack:
    emulator: OverlayEdgeSet
    hopset: OverlayEdgeSet
    beta_query: int
    eps_em: float
    eps_hop: float
    k: int
    seed: int
    _union: Graph | None = field(default=None, repr=False, compare=False)

    @property
    def union(self) -> Graph:
        if self._union is None:
            self._union = Graph(self.emulator.n, dedupe_edges(self.emulator.edges + self.hopset.edges))
        return self._union

    @property
    def size(self) -> int:
        return len(self.emulator) + len(self.hopset)

    def metadata(self) -> dict:
        return {
            "n": self.emulator.n,
            "k": self.k,
            "seed": self.seed,
            "eps_em": self.eps_em,
            "eps_hop": self.eps_hop,
            "beta_query": self.beta_query,
            "beta_em": beta_bound(BetaVariant.EMU_1EPS, self.k, self.eps_em).beta,
            "emulator_edges": len(self.emulator),
            "hopset_edges": len(self.hopset),
        }


def hopset_seed(seed: int) -> int:
    """Seed for the second construction pass, decorrelated from the first."""
    return (seed + 0x9E3779B97F4A7C15) & ((1 << 64) - 1)


def oracle_preprocess(g: Graph, k: int, eps_em: float, eps_hop: float, seed: int) -> DistanceOraclePack:
    """Emulator G' of G, then the same construction run on G' as its hopset."""
    beta_bound(BetaVariant.EMU_1EPS, k, eps_em)
    hop = beta_bound(BetaVariant.HOPSET_3EPS, k, eps_hop)
    em = build_emulator(g, k, seed)
    hs = as_hopset(build_emulator(em.to_graph(), k, hopset_seed(seed)))
    return DistanceOraclePack(em, hs, hop.hops, eps_em, eps_hop, k, seed)


def oracle_query(g: Graph, pack: DistanceOraclePack, u: int) -> HopBoundedResult:
    """``beta_query`` synchronous Bellman-Ford rounds on G' ∪ H' from u."""
    if pack.emulator.n != g.n:
        raise ParameterError("pack was built for a different graph")
    return bellman_ford_bounded(pack.union, u, pack.beta_query)


__all__ = [
    "AspResult",
    "DistanceOraclePack",
    "NoPathError",
    "asp_all",
    "asp_rows",
    "oracle_preprocess",
    "oracle_query",
]

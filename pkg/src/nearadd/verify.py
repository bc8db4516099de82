"""Exact ground truth, stretch checkers and seeded graph fixtures."""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import dijkstra as _csgraph_dijkstra

from .emulator import OverlayEdgeSet, as_fraction
from .errors import ParameterError
from .graph import Edge, Graph, bellman_ford_bounded_many, dijkstra_min_bottleneck, is_connected

log = logging.getLogger(__name__)

DEFAULT_CAP = 2000


@dataclass
class GroundTruth:
    dist: np.ndarray
    wmin: np.ndarray


def ground_truth(g: Graph, cap: int = DEFAULT_CAP) -> GroundTruth:
    """Exact APSP and min-bottleneck W(x, y) over shortest paths."""
    if g.n > cap:
        raise ParameterError(f"ground truth refused: n={g.n} exceeds cap {cap}")
    dist = np.empty((g.n, g.n))
    wmin = np.empty((g.n, g.n))
    for s in range(g.n):
        r = dijkstra_min_bottleneck(g, s)
        dist[s] = r.dist
        wmin[s] = r.bottleneck
    return GroundTruth(dist, wmin)


def floyd_warshall(n: int, edges: Sequence[Edge]) -> np.ndarray:
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0.0)
    for u, v, w in edges:
        if w < d[u, v]:
            d[u, v] = d[v, u] = w
    for k in range(n):
        np.minimum(d, d[:, k, None] + d[None, k, :], out=d)
    return d


def overlay_apsp(n: int, edges: Sequence[Edge]) -> np.ndarray:
    """All-pairs distances inside an edge set (which must have unique pairs)."""
    if not edges:
        d = np.full((n, n), np.inf)
        np.fill_diagonal(d, 0.0)
        return d
    e = np.asarray(edges, dtype=float)
    mat = sp.csr_matrix((e[:, 2], (e[:, 0].astype(int), e[:, 1].astype(int))), shape=(n, n))
    return _csgraph_dijkstra(mat, directed=False)


@dataclass
class ViolationReport:
    check: str
    params: dict
    violations: list[tuple[int, int, float, float]] = field(default_factory=list)
    pairs_checked: int = 0
    max_ratio: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        out = asdict(self)
        out["ok"] = self.ok
        out["violation_count"] = len(self.violations)
        out["violations"] = [list(v) for v in self.violations]
        return out


def _exact_violations(
    est: np.ndarray, dist: np.ndarray, wmin: np.ndarray, mult: Fraction, beta: Fraction
) -> np.ndarray:
    """Mask of pairs with est > mult·dist + beta·wmin, decided exactly.

    A float pass screens everything; pairs within a relative 1e-9 of the bound
    are re-decided with rationals (all fixture values are integers or exact
    binary floats, so Fraction(x) is the true value).
    """
    finite = np.isfinite(dist)
    add = np.where(finite, float(beta) * np.where(np.isfinite(wmin), wmin, 0.0), 0.0)
    bound = np.where(finite, float(mult) * dist + add, np.inf)
    with np.errstate(invalid="ignore"):
        over = est > bound
        near = finite & np.isfinite(est) & (np.abs(est - bound) <= 1e-9 * np.maximum(1.0, bound))
    for x, y in zip(*np.nonzero(near)):
        exact = mult * Fraction(float(dist[x, y])) + beta * Fraction(float(wmin[x, y]))
        over[x, y] = Fraction(float(est[x, y])) > exact
    # below the true distance is also a violation
    with np.errstate(invalid="ignore"):
        under = finite & (est < dist)
    return over | under | (~finite & np.isfinite(est))


def check_near_additive(
    g: Graph,
    overlay: OverlayEdgeSet,
    mult: float | Fraction,
    beta: float | Fraction,
    gt: GroundTruth,
    hops: int | None = None,
    name: str | None = None,
) -> ViolationReport:
    """Flag every pair whose overlay estimate breaks ``mult·d + beta·W``.

    With ``hops=None`` the estimate is the distance in the overlay alone.
    With an integer ``hops`` it is the ``hops``-bounded distance in
    ``G ∪ overlay`` and the bound is purely multiplicative (``beta`` unused).
    Estimates below the true distance are violations too.
    """
    m, b = as_fraction(mult), as_fraction(beta)
    if hops is None:
        est = overlay_apsp(g.n, overlay.edges)
        check = name or "near_additive"
    else:
        est = bellman_ford_bounded_many(g.n, list(g.edges) + list(overlay.edges), range(g.n), hops)
        b = Fraction(0)
        check = name or "hop_bounded"
    return report_from_estimates(check, est, gt, m, b, {"mult": str(m), "beta": str(b), "hops": hops, **overlay.params})


def report_from_estimates(
    check: str, est: np.ndarray, gt: GroundTruth, mult: Fraction, beta: Fraction, params: dict
) -> ViolationReport:
    mult, beta = as_fraction(mult), as_fraction(beta)
    mask = _exact_violations(est, gt.dist, gt.wmin, mult, beta)
    n = est.shape[0]
    off = ~np.eye(n, dtype=bool)
    mask &= off
    viol = []
    for x, y in zip(*np.nonzero(mask)):
        if x < y or not mask[y, x]:
            bound = float(mult) * gt.dist[x, y] + float(beta) * gt.wmin[x, y]
            viol.append((int(x), int(y), float(est[x, y]), float(bound)))
    fin = off & np.isfinite(gt.dist) & (gt.dist > 0) & np.isfinite(est)
    ratio = float((est[fin] / gt.dist[fin]).max()) if fin.any() else 1.0
    return ViolationReport(check, params, viol, int(off.sum()), ratio)


def check_subgraph(g: Graph, overlay: OverlayEdgeSet) -> ViolationReport:
    viol = []
    for u, v, w in overlay.edges:
        gw = g.weight(u, v)
        if gw is None or gw != w:
            viol.append((u, v, float(w), float("nan") if gw is None else float(gw)))
    return ViolationReport("subgraph", dict(overlay.params), viol, len(overlay.edges))


# ---------------------------------------------------------------- fixtures

MODELS = ("er", "grid", "path", "complete", "heavy-light")


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed & ((1 << 64) - 1))


def gen_er(n: int, p: float, seed: int, wmin: int = 1, wmax: int = 100, attempts: int = 100) -> Graph:
    """G(n, p) with integer weights uniform in ``[wmin, wmax]``.

    Disconnected draws are resampled; after ``attempts`` tries the last draw
    is returned and a warning logged (check with :func:`is_connected`).
    """
    if n < 1 or not 0 <= p <= 1 or wmin < 0 or wmax < wmin:
        raise ParameterError("er: need n >= 1, 0 <= p <= 1, 0 <= wmin <= wmax")
    rng = _rng(seed)
    iu, ju = np.triu_indices(n, 1)
    g = Graph(n, [])
    for _ in range(attempts):
        keep = rng.random(len(iu)) < p
        w = rng.integers(wmin, wmax + 1, size=int(keep.sum()))
        g = Graph(n, zip(iu[keep].tolist(), ju[keep].tolist(), w.tolist()))
        if is_connected(g):
            return g
    log.warning("er(n=%d, p=%g, seed=%d) still disconnected after %d attempts", n, p, seed, attempts)
    return g


def gen_grid(rows: int, cols: int, seed: int = 0, wmin: int = 1, wmax: int = 1) -> Graph:
    if rows < 1 or cols < 1 or wmin < 0 or wmax < wmin:
        raise ParameterError("grid: need rows, cols >= 1 and 0 <= wmin <= wmax")
    rng = _rng(seed)
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1, int(rng.integers(wmin, wmax + 1))))
            if r + 1 < rows:
                edges.append((v, v + cols, int(rng.integers(wmin, wmax + 1))))
    return Graph(rows * cols, edges)


def gen_path(n: int, w: float = 1) -> Graph:
    return Graph(n, [(i, i + 1, w) for i in range(n - 1)])


def gen_complete(n: int, w: float = 1) -> Graph:
    return Graph(n, [(i, j, w) for i in range(n) for j in range(i + 1, n)])


def gen_heavy_light(n: int, seed: int, shortcuts: int | None = None) -> Graph:
    """Unit-weight path plus random heavy shortcuts (weights 1e3..1e6).

    Global max weight is huge while most shortest paths only use unit edges,
    so a bound written with the global maximum is far looser than one with
    the per-pair W.
    """
    if n < 2:
        raise ParameterError("heavy-light: need n >= 2")
    rng = _rng(seed)
    edges: list[Edge] = [(i, i + 1, 1) for i in range(n - 1)]
    for _ in range(n // 10 if shortcuts is None else shortcuts):
        u, v = (int(x) for x in rng.choice(n, size=2, replace=False))
        edges.append((u, v, int(rng.integers(1_000, 1_000_001))))
    return Graph(n, edges)


def gen_graph(model: str, seed: int = 0, **params) -> Graph:
    """Dispatch to a fixture generator by model name."""
    if model == "er":
        return gen_er(params["n"], params.get("p", 0.05), seed, params.get("wmin", 1), params.get("wmax", 100))
    if model == "grid":
        return gen_grid(params["rows"], params["cols"], seed, params.get("wmin", 1), params.get("wmax", 1))
    if model == "path":
        return gen_path(params["n"], params.get("w", 1))
    if model == "complete":
        return gen_complete(params["n"], params.get("w", 1))
    if model == "heavy-light":
        return gen_heavy_light(params["n"], seed, params.get("shortcuts"))
    raise ParameterError(f"unknown model {model!r}; choose from {', '.join(MODELS)}")


def random_simple_path(g: Graph, x: int, y: int, rng: np.random.Generator, max_steps: int = 10_000) -> list[int] | None:
    """A random x-y simple path: random walk from x until y, then loop erasure."""
    walk = [x]
    pos = {x: 0}
    for _ in range(max_steps):
        cur = walk[-1]
        if cur == y:
            return walk
        nbrs = g.adj[cur]
        if not nbrs:
            return None
        nxt = nbrs[int(rng.integers(len(nbrs)))][0]
        if nxt in pos:
            cut = pos[nxt]
            for z in walk[cut + 1:]:
                del pos[z]
            del walk[cut + 1:]
        else:
            pos[nxt] = len(walk)
            walk.append(nxt)
    return None


def path_stats(g: Graph, path: Sequence[int]) -> tuple[float, float]:
    """``(total weight, heaviest edge)`` of a vertex path."""
    total, heavy = 0.0, 0.0
    for a, b in zip(path, path[1:]):
        w = g.weight(a, b)
        assert w is not None
        total += w
        heavy = max(heavy, w)
    return total, heavy


def global_max_ground_truth(g: Graph, gt: GroundTruth) -> GroundTruth:
    """Ground truth with W(x, y) replaced by the global maximum weight."""
    return GroundTruth(gt.dist, np.where(np.isfinite(gt.wmin), g.max_weight(), np.inf))


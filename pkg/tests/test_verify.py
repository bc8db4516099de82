import logging
import math

import numpy as np
import pytest

from nearadd.emulator import OverlayEdgeSet, OverlayKind, beta_bound, build_emulator
from nearadd.errors import ParameterError
from nearadd.graph import Graph, is_connected
from nearadd.spanner import build_spanner
from nearadd.verify import (
    check_near_additive,
    check_subgraph,
    floyd_warshall,
    gen_er,
    gen_graph,
    gen_heavy_light,
    global_max_ground_truth,
    ground_truth,
    random_simple_path,
)


def test_ground_truth_path():
    gt = ground_truth(Graph(3, [(0, 1, 1), (1, 2, 5)]))
    assert gt.dist[0, 2] == 6 and gt.wmin[0, 2] == 5


def test_ground_truth_triangle(triangle):
    assert ground_truth(triangle).wmin[0, 1] == 2


def test_ground_truth_matches_floyd_warshall():
    g = gen_er(60, 0.08, 3)
    gt = ground_truth(g)
    assert (gt.dist == floyd_warshall(g.n, g.edges)).all()
    assert (gt.dist == gt.dist.T).all()
    assert gt.wmin[np.isfinite(gt.wmin)].max() <= g.max_weight()


def test_ground_truth_cap():
    with pytest.raises(ParameterError, match="cap"):
        ground_truth(gen_er(30, 0.2, 1), cap=20)


def test_complete_exact_overlay_passes():
    g = gen_er(40, 0.1, 2)
    d = floyd_warshall(g.n, g.edges)
    edges = tuple((u, v, d[u, v]) for u in range(g.n) for v in range(u + 1, g.n))
    rep = check_near_additive(g, OverlayEdgeSet(g.n, edges, OverlayKind.EMULATOR), 1, 0, ground_truth(g))
    assert rep.ok and rep.max_ratio == 1.0


def test_empty_overlay_all_violate():
    g = gen_er(20, 0.3, 2)
    assert is_connected(g)
    rep = check_near_additive(g, OverlayEdgeSet(20, (), OverlayKind.EMULATOR), 1, 0, ground_truth(g))
    assert len(rep.violations) == 20 * 19 // 2


def test_underestimate_is_violation():
    g = Graph(2, [(0, 1, 5)])
    rep = check_near_additive(g, OverlayEdgeSet(2, ((0, 1, 4),), OverlayKind.EMULATOR), 1, 0, ground_truth(g))
    assert rep.violations == [(0, 1, 4.0, 5.0)]


def test_emulator_fixture_passes():
    g = gen_er(200, 0.05, 1)
    bp = beta_bound("Emu1Eps", 3, 0.5)
    rep = check_near_additive(g, build_emulator(g, 3, 1), bp.mult, bp.beta_exact, ground_truth(g))
    assert rep.ok
    assert rep.to_json()["violation_count"] == 0


def test_exact_boundary_not_a_violation():
    # estimate exactly on the bound: 1.1 * 10 + 0 = 11 must pass under exact arithmetic
    g = Graph(2, [(0, 1, 10)])
    rep = check_near_additive(g, OverlayEdgeSet(2, ((0, 1, 11),), OverlayKind.EMULATOR), 1.1, 0, ground_truth(g))
    assert rep.ok
    rep = check_near_additive(g, OverlayEdgeSet(2, ((0, 1, 11.000001),), OverlayKind.EMULATOR), 1.1, 0, ground_truth(g))
    assert not rep.ok


def test_subgraph_checks():
    g = gen_er(80, 0.05, 4)
    assert check_subgraph(g, build_spanner(g, 2, 4).spanner).ok
    assert not check_subgraph(g, build_emulator(g, 2, 4)).ok
    u, v, w = g.edges[0]
    mutated = OverlayEdgeSet(g.n, ((u, v, w + 1),) + g.edges[1:], OverlayKind.SPANNER)
    assert len(check_subgraph(g, mutated).violations) == 1


def test_heavy_light_discriminates_local_w():
    g = gen_heavy_light(60, 3)
    gt = ground_truth(g)
    # drop one unit edge from the overlay: pairs across the gap must detour
    cut = next(e for e in g.edges if e[2] == 1 and e[0] == 30)
    overlay = OverlayEdgeSet(g.n, tuple(e for e in g.edges if e != cut), OverlayKind.SPANNER)
    strict = check_near_additive(g, overlay, 1, 2, gt)
    loose = check_near_additive(g, overlay, 1, 2, global_max_ground_truth(g, gt))
    assert not strict.ok
    assert loose.ok


def test_gen_path_and_complete():
    assert gen_graph("path", n=3).edges == ((0, 1, 1), (1, 2, 1))
    assert gen_graph("complete", n=4).m == 6


def test_gen_er_edge_count():
    n, p = 100, 0.1
    g = gen_graph("er", seed=5, n=n, p=p)
    pairs = n * (n - 1) / 2
    assert abs(g.m - p * pairs) <= 5 * math.sqrt(pairs * p * (1 - p))
    assert all(1 <= w <= 100 for *_, w in g.edges)


def test_gen_er_disconnected_warns(caplog):
    with caplog.at_level(logging.WARNING):
        g = gen_er(50, 0.001, 1, attempts=3)
    assert not is_connected(g)
    assert "disconnected" in caplog.text


def test_gen_grid_and_unknown():
    g = gen_graph("grid", rows=3, cols=4)
    assert g.n == 12 and g.m == 3 * 3 + 2 * 4
    with pytest.raises(ParameterError):
        gen_graph("torus", n=3)


def test_gen_deterministic():
    assert gen_graph("heavy-light", seed=2, n=50) == gen_graph("heavy-light", seed=2, n=50)
    assert gen_graph("er", seed=2, n=50, p=0.1) != gen_graph("er", seed=3, n=50, p=0.1)


def test_random_simple_path_is_simple():
    g = gen_er(50, 0.1, 9)
    rng = np.random.default_rng(0)
    for _ in range(30):
        p = random_simple_path(g, 0, 49, rng)
        assert p[0] == 0 and p[-1] == 49 and len(set(p)) == len(p)
        assert all(g.weight(a, b) is not None for a, b in zip(p, p[1:]))

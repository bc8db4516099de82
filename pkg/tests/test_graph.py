import io
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nearadd.errors import NoPathError, ParseError
from nearadd.graph import (
    INF,
    Graph,
    bellman_ford_bounded,
    bellman_ford_bounded_many,
    dijkstra,
    dijkstra_min_bottleneck,
    extract_path,
    load_graph,
    path_weight,
    write_gr,
)
from nearadd.verify import floyd_warshall


@st.composite
def graphs(draw, max_n=12, max_w=20, max_edges=None):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if not pairs:
        return Graph(n, [])
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=max_edges or len(pairs)))
    ws = draw(st.lists(st.integers(0, max_w), min_size=len(chosen), max_size=len(chosen)))
    return Graph(n, [(u, v, w) for (u, v), w in zip(chosen, ws)])


def all_simple_paths(g, s, t):
    out, stack = [], [(s, [s])]
    while stack:
        u, path = stack.pop()
        if u == t:
            out.append(path)
            continue
        for v, _ in g.adj[u]:
            if v not in path:
                stack.append((v, path + [v]))
    return out


def random_graph(rng, n, p, wmax=30):
    return Graph(n, [(u, v, rng.randint(1, wmax)) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


# ------------------------------------------------------------ load_graph

def test_load_single_edge():
    g = load_graph(io.StringIO("p sp 2 1\na 0 1 5\n"))
    assert g.n == 2 and g.edges == ((0, 1, 5.0),)


def test_load_path():
    g = load_graph(io.StringIO("c comment\np sp 3 2\na 0 1 1\na 1 2 1\n"))
    assert g.edges == ((0, 1, 1.0), (1, 2, 1.0))
    assert g.adj[1] == ((0, 1.0), (2, 1.0))


def test_load_collapses_parallel_edges():
    g = load_graph(io.StringIO("p sp 2 2\na 0 1 2\na 1 0 3\n"))
    assert g.edges == ((0, 1, 2.0),)


def test_load_drops_self_loops():
    g = load_graph(io.StringIO("p sp 2 2\na 0 0 2\na 1 0 3\n"))
    assert g.edges == ((0, 1, 3.0),)


@pytest.mark.parametrize(
    "text, lineno",
    [
        ("p sp 2 1\na 0 1 -1\n", 2),
        ("p sp 2 1\na 0 2 1\n", 2),
        ("p sp 2 1\np sp 2 1\n", 2),
        ("p sp 2 1\nc ok\na 0 x 1\n", 3),
        ("a 0 1 1\n", 1),
        ("p sp 2 1\nq 1\n", 2),
        ("p sp 2 1\na 0 1\n", 2),
    ],
)
def test_load_errors_name_line(text, lineno):
    with pytest.raises(ParseError) as exc:
        load_graph(io.StringIO(text))
    assert exc.value.lineno == lineno
    assert f"line {lineno}" in str(exc.value)


def test_write_roundtrip():
    g = Graph(4, [(0, 1, 2), (1, 2, 2.5), (3, 2, 7)])
    buf = io.StringIO()
    write_gr(buf, g.n, g.edges, ["kind=test"])
    assert load_graph(io.StringIO(buf.getvalue())) == g


# ------------------------------------------------------------ dijkstra

def test_dijkstra_path(path3):
    assert dijkstra(path3, 0).dist == [0, 1, 2]


def test_dijkstra_triangle_tie(triangle):
    r = dijkstra(triangle, 0)
    assert r.dist[1] == 3
    # both 0-1 and 0-2-1 have length 3; smaller parent id wins
    assert r.parent[1] == 0


def test_dijkstra_matches_floyd_warshall_10():
    g = random_graph(random.Random(5), 10, 0.4)
    fw = floyd_warshall(g.n, g.edges)
    assert dijkstra(g, 0).dist == fw[0].tolist()


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=64, max_edges=200))
def test_dijkstra_equals_floyd_warshall(g):
    fw = floyd_warshall(g.n, g.edges)
    for s in range(min(g.n, 8)):
        assert dijkstra(g, s).dist == fw[s].tolist()


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=30, max_edges=80))
def test_sssp_result_invariants(g):
    for s in range(min(g.n, 5)):
        for r in (dijkstra(g, s), dijkstra_min_bottleneck(g, s)):
            assert r.dist[s] == 0 and r.parent[s] is None
            for v in range(g.n):
                p = r.parent[v]
                if p is None:
                    continue
                w = g.weight(p, v)
                assert r.dist[p] + w == r.dist[v]
                assert r.bottleneck[v] == max(r.bottleneck[p], w)


def test_dijkstra_deterministic_parents():
    g = Graph(4, [(0, 1, 1), (0, 2, 1), (1, 3, 1), (2, 3, 1)])
    assert dijkstra(g, 0).parent == [None, 0, 0, 1]
    assert dijkstra(g, 3).parent == [1, 3, 3, None]


# ------------------------------------------------------------ min bottleneck

def test_min_bottleneck_triangle(triangle):
    # shortest 0-1 paths: direct (max 3) and via 2 (max 2)
    paths = [p for p in all_simple_paths(triangle, 0, 1) if path_weight(triangle, p) == 3]
    expected = min(max(triangle.weight(a, b) for a, b in zip(p, p[1:])) for p in paths)
    r = dijkstra_min_bottleneck(triangle, 0)
    assert expected == 2
    assert r.dist[1] == 3 and r.bottleneck[1] == 2
    assert extract_path(r, 1) == [0, 2, 1]


def test_min_bottleneck_unique_path():
    r = dijkstra_min_bottleneck(Graph(3, [(0, 1, 1), (1, 2, 5)]), 0)
    assert r.bottleneck[2] == 5


def test_min_bottleneck_unweighted():
    g = Graph(5, [(0, 1, 1), (1, 2, 1), (0, 3, 1), (3, 2, 1)])
    r = dijkstra_min_bottleneck(g, 0)
    assert r.bottleneck[1:4] == [1, 1, 1]
    assert r.bottleneck[4] == INF


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=12, max_edges=18))
def test_min_bottleneck_against_enumeration(g):
    for s in range(g.n):
        r = dijkstra_min_bottleneck(g, s)
        assert r.dist == dijkstra(g, s).dist
        for t in range(g.n):
            if t == s or r.dist[t] == INF:
                continue
            shortest = [p for p in all_simple_paths(g, s, t) if path_weight(g, p) == r.dist[t]]
            assert shortest
            heaviest = [max(g.weight(a, b) for a, b in zip(p, p[1:])) for p in shortest]
            assert r.bottleneck[t] == min(heaviest)


# ------------------------------------------------------------ Bellman-Ford

def test_bellman_ford_too_few_rounds():
    g = Graph(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)])
    assert bellman_ford_bounded(g, 0, 2).dist[3] == INF
    r = bellman_ford_bounded(g, 0, 3)
    assert r.dist[3] == 3 and r.hops_used[3] == 3


def test_bellman_ford_zero_rounds(path3):
    r = bellman_ford_bounded(path3, 0, 0)
    assert r.dist == [0, INF, INF] and r.relaxations == 0


def test_bellman_ford_prefers_light_long_path_only_with_hops():
    g = Graph(4, [(0, 3, 10), (0, 1, 1), (1, 2, 1), (2, 3, 1)])
    assert bellman_ford_bounded(g, 0, 1).dist[3] == 10
    assert bellman_ford_bounded(g, 0, 2).dist[3] == 10
    assert bellman_ford_bounded(g, 0, 3).dist[3] == 3


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=20, max_edges=50))
def test_bellman_ford_full_rounds_equals_dijkstra_and_monotone(g):
    prev = None
    for t in range(g.n):
        cur = bellman_ford_bounded(g, 0, t).dist
        if prev is not None:
            assert all(c <= p for c, p in zip(cur, prev))
        prev = cur
    assert bellman_ford_bounded(g, 0, max(g.n - 1, 0)).dist == dijkstra(g, 0).dist


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=16, max_edges=40), st.integers(0, 6))
def test_bellman_ford_matches_hop_enumeration(g, rounds):
    # brute force: lightest walk with <= rounds edges via DP over exact hop counts
    best = [INF] * g.n
    cur = {0: 0.0}
    best[0] = 0.0
    for _ in range(rounds):
        nxt = {}
        for u, d in cur.items():
            for v, w in g.adj[u]:
                if d + w < nxt.get(v, INF):
                    nxt[v] = d + w
        for v, d in nxt.items():
            best[v] = min(best[v], d)
        cur = nxt
    assert bellman_ford_bounded(g, 0, rounds).dist == best


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=16, max_edges=40), st.integers(0, 6))
def test_vectorised_bellman_ford_matches_scalar(g, rounds):
    many = bellman_ford_bounded_many(g.n, g.edges, range(g.n), rounds, chunk_elems=50)
    for s in range(g.n):
        assert many[s].tolist() == bellman_ford_bounded(g, s, rounds).dist


def test_relaxation_counter_counts_edge_rounds():
    g = Graph(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)])
    r = bellman_ford_bounded(g, 0, 10)
    # 3 improving rounds then one quiet round
    assert r.rounds_run == 4 and r.relaxations == 4 * g.m


# ------------------------------------------------------------ extract_path

def test_extract_path(path3):
    r = dijkstra(path3, 0)
    assert extract_path(r, 2) == [0, 1, 2]
    assert extract_path(r, 0) == [0]


def test_extract_path_unreachable():
    r = dijkstra(Graph(3, [(0, 1, 1)]), 0)
    with pytest.raises(NoPathError):
        extract_path(r, 2)


def test_extract_path_weight_sums_to_dist():
    rng = random.Random(11)
    g = random_graph(rng, 15, 0.3)
    r = dijkstra(g, 0)
    for t in range(g.n):
        if r.dist[t] < INF:
            p = extract_path(r, t)
            assert path_weight(g, p) == r.dist[t]


@settings(max_examples=50, deadline=None)
@given(graphs(max_n=25, max_edges=60))
def test_extract_path_weight_exact(g):
    r = dijkstra(g, 0)
    for t in range(g.n):
        if r.dist[t] < INF:
            assert path_weight(g, extract_path(r, t)) == r.dist[t]


def test_graph_rejects_negative_weight():
    with pytest.raises(ValueError):
        Graph(2, [(0, 1, -1)])


def test_inf_sentinel_distinct():
    assert math.isinf(INF) and np.isinf(INF)

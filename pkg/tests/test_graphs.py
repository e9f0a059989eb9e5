import random
from fractions import Fraction
from itertools import combinations

import networkx as nx
import pytest

from planar4 import generators as gen
from planar4.graphs import (
    Graph,
    average_degree,
    collect_closure,
    connected_components,
    delete_vertex,
    gamma,
    gamma_breakdown,
    graph6_bytes,
    graph6_loads,
    is_k_degenerate,
)


def k4():
    return Graph.from_edges(combinations(range(4), 2))


def test_collect_closure_octahedron_all_collected():
    g = gen.named("octahedron").graph
    res = collect_closure(g, 4)
    assert len(res.order) == 6
    assert len(res.remainder) == 0


def test_collect_closure_icosahedron_stuck():
    g = gen.named("icosahedron").graph
    res = collect_closure(g, 4)
    assert res.order == ()
    assert res.remainder.vertices == g.vertices


def test_collect_closure_icosahedron_minus_vertex_collects_all():
    g = delete_vertex(gen.named("icosahedron").graph, 0)
    res = collect_closure(g, 4)
    assert len(res.order) == 11
    assert len(res.remainder) == 0


def test_closure_order_is_degree_then_id():
    # star plus an edge: leaves go first in id order
    g = Graph.from_edges([(0, i) for i in range(1, 5)] + [(1, 2)])
    res = collect_closure(g, 4)
    assert res.order[0] == 3 and res.order[1] == 4


def test_closure_remainder_is_min_degree_k_plus_1():
    for seed in range(5):
        eg = gen.random_triangulation(40, seed=seed)
        for k in (2, 3, 4):
            rem = collect_closure(eg.graph, k).remainder
            if len(rem):
                assert min(rem.degree(v) for v in rem.vertex_list) >= k + 1


def test_closure_order_replays_legally():
    # each collected vertex has degree <= k at its collection moment
    for seed in range(4):
        g = gen.random_triangulation(30, seed=seed).graph
        for k in (3, 4):
            res = collect_closure(g, k)
            adj = {v: set(g.neighbors(v)) for v in g.vertex_list}
            for v in res.order:
                assert len(adj[v]) <= k
                for u in adj.pop(v):
                    adj[u].discard(v)
            assert set(adj) == set(res.remainder.vertices)


def test_is_k_degenerate():
    assert is_k_degenerate(k4(), 3)
    assert not is_k_degenerate(gen.named("icosahedron").graph, 4)
    for seed in range(5):
        assert is_k_degenerate(gen.random_triangulation(30, seed=seed).graph, 5)


def test_gamma_breakdown_examples():
    ico = gamma_breakdown(gen.named("icosahedron").graph)
    assert (ico.phi, ico.tree_components, ico.gamma) == (0, 0, Fraction(1))
    b = gamma_breakdown(k4())
    assert (b.phi, b.tree_components, b.gamma) == (-8, 0, Fraction(1, 9))


def test_gamma_zero_on_random_trees():
    rng = random.Random(7)
    for n in (2, 17, 120, 1000):
        edges = [(i, rng.randrange(i)) for i in range(1, n)]
        t = Graph.from_edges(edges)
        b = gamma_breakdown(t)
        assert b.tree_components == 1
        assert b.gamma == 0


def test_gamma_average_degree_identity():
    # connected with average degree >= 2: gamma = (d-2)/36 * n exactly
    for seed in range(6):
        g = gen.random_triangulation(25, seed=seed).graph
        d = average_degree(g)
        assert gamma(g) == (d - 2) / 36 * len(g)
    cycle = Graph.from_edges([(i, (i + 1) % 9) for i in range(9)])
    assert gamma(cycle) == 0


def test_delete_vertex_icosahedron_degree_sequence():
    g = delete_vertex(gen.named("icosahedron").graph, 5)
    seq = sorted(g.degree(v) for v in g.vertex_list)
    assert seq == [4] * 5 + [5] * 6


def test_delete_vertex_edge_cases():
    single = Graph.from_edges([], vertices=[3])
    assert len(delete_vertex(single, 3)) == 0
    tri = delete_vertex(k4(), 2)
    assert len(tri) == 3 and tri.edge_count == 3
    with pytest.raises(KeyError):
        delete_vertex(k4(), 9)


def test_average_degree():
    assert average_degree(gen.named("icosahedron").graph) == 5
    assert average_degree(k4()) == 3
    path3 = Graph.from_edges([(0, 1), (1, 2)])
    assert average_degree(path3) == Fraction(4, 3)
    with pytest.raises(ValueError):
        average_degree(Graph.from_edges([]))


def test_connected_components():
    two = Graph.from_edges([(0, 1), (1, 2), (0, 2), (5, 6), (6, 7), (5, 7)])
    comps = connected_components(two)
    assert sorted(len(c) for c in comps) == [3, 3]
    assert len(connected_components(gen.named("icosahedron").graph)) == 1
    assert connected_components(Graph.from_edges([])) == []


def _random_greedy_collect(g, k, rng):
    """Independent greedy collector with random tie-breaking."""
    adj = {v: set(g.neighbors(v)) for v in g.vertex_list}
    removed = set()
    while True:
        avail = [v for v in adj if len(adj[v]) <= k]
        if not avail:
            return removed
        v = rng.choice(avail)
        removed.add(v)
        for u in adj.pop(v):
            adj[u].discard(v)


def test_closure_confluence_hundred_random_orders():
    rng = random.Random(99)
    for seed in (0, 1):
        g = gen.random_triangulation(18, seed=seed).graph
        reference = set(collect_closure(g, 4).order)
        for _ in range(100):
            assert _random_greedy_collect(g, 4, rng) == reference


def test_gamma_never_increases_under_collection():
    # every legal collect (degree <= 4) keeps gamma from rising
    rng = random.Random(5)
    for seed in range(4):
        g = gen.random_triangulation(22, seed=seed).graph
        for _ in range(40):
            v = rng.choice(g.vertex_list)
            if g.degree(v) <= 4:
                assert gamma(delete_vertex(g, v)) <= gamma(g)


# ---------------------------------------------------------------------------
# graph6
# ---------------------------------------------------------------------------


def test_graph6_k4_is_c_tilde():
    assert graph6_bytes(k4()) == b"C~"
    assert graph6_loads(b"C~") == k4()


def test_graph6_roundtrip_random_and_vs_networkx():
    rng = random.Random(11)
    for _ in range(40):
        n = rng.randrange(0, 30)
        edges = set()
        for _ in range(rng.randrange(0, 3 * n + 1)):
            u, v = rng.randrange(n), rng.randrange(n)
            if u != v:
                edges.add((min(u, v), max(u, v)))
        g = Graph.from_edges(edges, vertices=range(n))
        blob = graph6_bytes(g)
        assert graph6_bytes(graph6_loads(blob)) == blob
        nxg = nx.Graph()
        nxg.add_nodes_from(range(n))
        nxg.add_edges_from(edges)
        assert nx.to_graph6_bytes(nxg, header=False).strip() == blob


def test_graph6_large_header():
    # n >= 63 exercises the multi-byte size encoding
    path = Graph.from_edges([(i, i + 1) for i in range(69)])
    blob = graph6_bytes(path)
    assert blob[0] == 126
    assert graph6_loads(blob) == path


def test_graph6_rejects_garbage():
    from planar4.errors import FormatError

    with pytest.raises(FormatError):
        graph6_loads(b"C")  # truncated body
    with pytest.raises(FormatError):
        graph6_loads(bytes([62, 10, 200]))

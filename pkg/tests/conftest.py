import os

import pytest

from planar4 import generators as gen
from planar4.embedding import embed_graph
from planar4.graphs import Graph, graph6_loads

DATA = os.path.join(os.path.dirname(__file__), "data")


def load_fixture_g6(name: str) -> Graph:
    with open(os.path.join(DATA, name)) as fh:
        return graph6_loads(fh.read().strip())


@pytest.fixture(scope="session")
def named_graphs():
    return {name: gen.named(name) for name in gen.NAMED_GRAPHS}


@pytest.fixture(scope="session")
def min_deg5_corpus():
    """Connected min-degree-5 embedded graphs: the discharging lemmas'
    hypothesis class."""
    corpus = [
        ("icosahedron", gen.named("icosahedron")),
        ("lemma10_fixture", gen.named("lemma10_fixture")),
        ("wheel7", gen.disk_fixture([2] * 7)),
        ("no_good_subgraph_139", embed_graph(load_fixture_g6("no_good_subgraph_139.g6"))),
    ]
    for n, seed in [(14, 0), (14, 3), (20, 1), (30, 2), (30, 7), (50, 4), (80, 5)]:
        corpus.append((f"rand5_{n}_{seed}", gen.random_triangulation(n, seed=seed, min_degree_target=5)))
    return corpus


@pytest.fixture(scope="session")
def mixed_corpus(named_graphs):
    """Embedded graphs of all stripes for conservation-style checks."""
    corpus = [(name, eg) for name, eg in named_graphs.items()]
    corpus.append(("pentagon_gadget", gen.layered_fixture([[3] * 5, [3] * 10])))
    corpus.append(("disk_8a", gen.layered_fixture([[2, 3, 3, 3, 3, 3, 3, 3]])))
    for n, seed in [(24, 0), (40, 1), (64, 2)]:
        corpus.append((f"rand_{n}_{seed}", gen.random_triangulation(n, seed=seed)))
    for n, seed in [(20, 3), (36, 6)]:
        corpus.append((f"rand5_{n}_{seed}", gen.random_triangulation(n, seed=seed, min_degree_target=5)))
    # a tree and a path keep the non-triangulation face logic honest
    corpus.append(("path6", embed_graph(Graph.from_edges([(i, i + 1) for i in range(5)]))))
    corpus.append(
        ("spider", embed_graph(Graph.from_edges([(0, i) for i in range(1, 6)] + [(1, 6), (6, 7)])))
    )
    return corpus

"""Test-corpus production: named graphs, random triangulations, exhaustive
streams, and stream ingestion.

Named fixtures are built from two validated constructions:

* :func:`disk_fixture` -- a triangulated disk: hub, inner ring, outer ring,
  closing apex.  ``disk_fixture([2]*5)`` is the icosahedron;
  ``disk_fixture([2]*8)`` realises a degree-8 hub whose eight neighbours all
  have degree 5 with every incident face triangular, inside an 18-vertex
  min-degree-5 triangulation.
* :func:`bipyramid` -- two apexes over a ring (``bipyramid(4)`` is the
  octahedron); the cube and dodecahedron are planar duals of these.

Random triangulations grow from K4 by repeated degree-3 vertex insertion
into a uniformly random face, followed by random diagonal flips; the
distribution is NOT uniform over triangulations (the corpus exists for
bound-checking, not statistics).  Randomness comes from `random.Random(seed)`
(Mersenne Twister: fixed algorithm, identical across platforms), so a
(n, seed) pair reproduces the same graph everywhere.

Exhaustive streams are generated in-process: all triangulations on n
vertices by flip-BFS from the stacked triangulation (the flip graph of
triangulations is connected), deduplicated by a canonical rotation code; all
connected planar graphs on n vertices by edge-deletion BFS downward from the
triangulations (every connected planar graph is a spanning subgraph of a
maximal planar one, and deleting only edges outside the target keeps every
intermediate connected).  Counts are cross-checked against published
enumeration in the tests.
"""

import random
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from . import kernels
from .embedding import (
    EmbeddedGraph,
    build_embedded,
    is_planar,
    planar_dual,
    read_planar_code,
)
from .errors import FormatError, GenerationError
from .graphs import Graph, read_graph6

NAMED_GRAPHS = (
    "K4",
    "octahedron",
    "icosahedron",
    "cube",
    "dodecahedron",
    "glued_octahedra",
    "lemma10_fixture",
)


@dataclass(frozen=True)
class GeneratorSpec:
    """Reproducible description of one corpus element: an identical spec
    realizes the identical graph (and embedding) on every platform."""

    kind: str  # named | random_triangulation | stream
    name: Optional[str] = None
    n: Optional[int] = None
    seed: Optional[int] = None
    min_degree_target: int = 3
    path: Optional[str] = None
    format: Optional[str] = None


def realize(spec: GeneratorSpec):
    """Materialise a GeneratorSpec: an EmbeddedGraph for named/random kinds,
    a StreamRecord iterator for streams."""
    if spec.kind == "named":
        return named(spec.name)
    if spec.kind == "random_triangulation":
        return random_triangulation(spec.n, spec.seed, spec.min_degree_target)
    if spec.kind == "stream":
        return ingest_stream(spec.path, spec.format)
    raise ValueError(f"unknown generator kind {spec.kind!r}")


def layered_fixture(arc_layers: Sequence[Sequence[int]]) -> EmbeddedGraph:
    """Triangulation built from concentric rings: hub, rings, closing apex.

    ``arc_layers[k][i]`` is how many ring-(k+1) vertices the i-th ring-k
    vertex sees; consecutive vertices of a ring share one outer neighbour,
    so the next ring has ``sum(c - 1)`` vertices and ``deg(v) = 3 + c`` on
    inner rings.  All arcs must be >= 2.  Examples: ``[[2]*5]`` is the
    icosahedron; ``[[2]*8]`` realises a degree-8 hub all of whose eight
    neighbours have degree 5 (every face triangular)."""
    if not arc_layers or len(arc_layers[0]) < 3:
        raise ValueError("need a first ring of length >= 3")
    sizes = [len(arc_layers[0])]
    for arcs in arc_layers:
        if len(arcs) != sizes[-1]:
            raise ValueError("arc list length must match its ring size")
        if any(c < 2 for c in arcs):
            raise ValueError("all arcs must be >= 2")
        sizes.append(sum(c - 1 for c in arcs))
    hub = 0
    ring_ids: List[List[int]] = []
    nxt = 1
    for size in sizes:
        ring_ids.append(list(range(nxt, nxt + size)))
        nxt += size
    apex = nxt
    n_rings = len(sizes)

    rotation: Dict[int, Tuple[int, ...]] = {hub: tuple(ring_ids[0])}
    # inward clusters of ring k+1 (position -> inner neighbours), from ring
    # k's arcs; ring 0 vertices all see the hub
    inward: List[Dict[int, Tuple[int, ...]]] = [dict() for _ in range(n_rings)]
    outward_arcs: List[List[List[int]]] = []
    for k in range(n_rings):
        ring = ring_ids[k]
        q_next = sizes[k + 1] if k + 1 < n_rings else 0
        if k + 1 < n_rings:
            arcs = arc_layers[k]
            nxt_ring = ring_ids[k + 1]

            def at(j: int) -> int:
                return nxt_ring[(j - 1) % q_next]

            starts = [1]
            for c in arcs[:-1]:
                starts.append(starts[-1] + c - 1)
            arcs_of = [
                [at(starts[i] + t) for t in range(arcs[i])] for i in range(len(ring))
            ]
            outward_arcs.append(arcs_of)
            # record inward clusters for ring k+1
            clusters: Dict[int, Tuple[int, ...]] = {}
            starter_at = {(starts[i] - 1) % q_next + 1: i for i in range(len(ring))}
            for i in range(len(ring)):
                for t in range(1, arcs[i] - 1):
                    j = (starts[i] + t - 1) % q_next + 1
                    clusters[j] = (ring[i],)
            for j, i in starter_at.items():
                clusters[j] = (ring[i], ring[(i - 1) % len(ring)])
            inward[k + 1] = clusters
        else:
            outward_arcs.append([[apex]] * len(ring))
    for k in range(n_rings):
        ring = ring_ids[k]
        p = len(ring)
        for i, v in enumerate(ring):
            outward = outward_arcs[k][i]
            nxt_v = ring[(i + 1) % p]
            prv_v = ring[(i - 1) % p]
            inw = (hub,) if k == 0 else inward[k][i + 1]
            rotation[v] = tuple(list(outward) + [nxt_v] + list(inw) + [prv_v])
    rotation[apex] = tuple(reversed(ring_ids[-1]))
    edges = set()
    for v, rot in rotation.items():
        for w in rot:
            edges.add((min(v, w), max(v, w)))
    g = Graph.from_edges(sorted(edges), vertices=range(apex + 1))
    return build_embedded(g, rotation)


def disk_fixture(arcs: Sequence[int]) -> EmbeddedGraph:
    """One-ring special case of layered_fixture."""
    return layered_fixture([list(arcs)])


def bipyramid(p: int) -> EmbeddedGraph:
    """Two apexes joined over a p-ring; bipyramid(4) is the octahedron."""
    if p < 3:
        raise ValueError("ring must have at least 3 vertices")
    a, b = 0, p + 1
    ring = list(range(1, p + 1))

    def r(i: int) -> int:
        return ring[(i - 1) % p]

    rotation = {a: tuple(ring), b: tuple(reversed(ring))}
    for i in range(1, p + 1):
        rotation[r(i)] = (b, r(i + 1), a, r(i - 1))
    edges = set()
    for v, rot in rotation.items():
        for w in rot:
            edges.add((min(v, w), max(v, w)))
    g = Graph.from_edges(sorted(edges), vertices=range(p + 2))
    return build_embedded(g, rotation)


def _k4() -> EmbeddedGraph:
    rotation = {0: (1, 2, 3), 1: (2, 0, 3), 2: (0, 1, 3), 3: (0, 2, 1)}
    g = Graph.from_edges([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    return build_embedded(g, rotation)


def glue_on_triangle(eg1: EmbeddedGraph, face1: int, eg2: EmbeddedGraph, face2: int) -> EmbeddedGraph:
    """Paste eg2 onto eg1 by identifying two triangular faces.

    eg2 is reflected, its face-2 boundary is matched to face 1's, and its
    remaining vertices are renumbered above eg1's.  The result of gluing two
    triangulations is again a triangulation (checked by the Euler test in
    build_embedded)."""
    f1 = eg1.faces[face1]
    f2 = eg2.faces[face2]
    if f1.length != 3 or f2.length != 3:
        raise ValueError("glue_on_triangle needs triangular faces")
    walk1 = [u for u, _ in f1.boundary]
    walk2 = [u for u, _ in f2.boundary]
    rename = {walk2[i]: walk1[i] for i in range(3)}
    fresh = max(eg1.graph.vertex_list) + 1
    for v in eg2.graph.vertex_list:
        if v not in rename:
            rename[v] = fresh
            fresh += 1

    def rot2(v: int) -> List[int]:
        # eg2 enters as its mirror image so the rotations mesh across the seam
        return [rename[u] for u in reversed(eg2.rotation[v])]

    def arc_between(cyc: List[int], frm: int, to: int) -> List[int]:
        i = cyc.index(frm)
        rot = cyc[i:] + cyc[:i]
        return rot[1 : rot.index(to)]

    rotation = {v: list(eg1.rotation[v]) for v in eg1.graph.vertex_list}
    for v in eg2.graph.vertex_list:
        rv = rename[v]
        if rv not in rotation:
            rotation[rv] = rot2(v)
    for i in range(3):
        seam = walk1[i]
        prev1 = walk1[(i - 1) % 3]
        succ1 = walk1[(i + 1) % 3]
        arc = arc_between(rot2(walk2[i]), prev1, succ1)
        base = rotation[seam]
        at = base.index(prev1)
        rotation[seam] = base[: at + 1] + arc + base[at + 1 :]
    edges = set()
    for v, rot in rotation.items():
        for w in rot:
            edges.add((min(v, w), max(v, w)))
    g = Graph.from_edges(sorted(edges), vertices=sorted(rotation))
    return build_embedded(g, {v: tuple(r) for v, r in rotation.items()})


def named(name: str) -> EmbeddedGraph:
    """Canonical named fixture with its standard rotation system."""
    key = name.lower()
    if key == "k4":
        return _k4()
    if key == "octahedron":
        return bipyramid(4)
    if key == "icosahedron":
        return disk_fixture([2] * 5)
    if key == "cube":
        return planar_dual(bipyramid(4))
    if key == "dodecahedron":
        return planar_dual(disk_fixture([2] * 5))
    if key == "glued_octahedra":
        oct1 = bipyramid(4)
        oct2 = bipyramid(4)
        return glue_on_triangle(oct1, 0, oct2, 0)
    if key == "lemma10_fixture":
        return disk_fixture([2] * 8)
    raise ValueError(f"unknown named graph {name!r}; choose from {NAMED_GRAPHS}")


# ---------------------------------------------------------------------------
# Random triangulations (insertion + diagonal flips)
# ---------------------------------------------------------------------------


class _Triangulation:
    """Mutable rotation-system triangulation supporting insertion and flips."""

    def __init__(self):
        self.rot: List[List[int]] = [[1, 2, 3], [2, 0, 3], [0, 1, 3], [0, 2, 1]]
        self.adj: List[set] = [set(r) for r in self.rot]
        # oriented faces, kept in step with self.rot
        self.faces: List[Tuple[int, int, int]] = [(0, 2, 1), (0, 1, 3), (1, 2, 3), (2, 0, 3)]

    def degree(self, v: int) -> int:
        return len(self.rot[v])

    def insert_into_face(self, fi: int) -> int:
        a, b, c = self.faces[fi]
        w = len(self.rot)
        for (x, after, new) in ((b, a, w), (c, b, w), (a, c, w)):
            r = self.rot[x]
            r.insert(r.index(after) + 1, new)
        self.rot.append([a, c, b])
        self.adj.append({a, b, c})
        self.adj[a].add(w)
        self.adj[b].add(w)
        self.adj[c].add(w)
        self.faces[fi] = (a, b, w)
        self.faces.append((b, c, w))
        self.faces.append((c, a, w))
        return w

    def flip_candidates(self, a: int, b: int) -> Optional[Tuple[int, int]]:
        """Opposite vertices (x, y) of edge ab, or None when the flip is
        invalid (xy already present)."""
        ra, rb = self.rot[a], self.rot[b]
        x = rb[(rb.index(a) + 1) % len(rb)]  # face (a, b, x)
        y = ra[(ra.index(b) + 1) % len(ra)]  # face (b, a, y)
        if x == y or y in self.adj[x]:
            return None
        return x, y

    def flip(self, a: int, b: int, x: int, y: int) -> None:
        self.rot[a].remove(b)
        self.rot[b].remove(a)
        self.adj[a].discard(b)
        self.adj[b].discard(a)
        rx = self.rot[x]
        rx.insert(rx.index(b) + 1, y)
        ry = self.rot[y]
        ry.insert(ry.index(a) + 1, x)
        self.adj[x].add(y)
        self.adj[y].add(x)

    def random_edge(self, rng: random.Random) -> Tuple[int, int]:
        a = rng.randrange(len(self.rot))
        b = self.rot[a][rng.randrange(len(self.rot[a]))]
        return a, b

    def to_embedded(self) -> EmbeddedGraph:
        n = len(self.rot)
        g = Graph.from_adjacency({v: self.adj[v] for v in range(n)})
        return build_embedded(g, {v: tuple(self.rot[v]) for v in range(n)})


def random_triangulation(n: int, seed: int, min_degree_target: int = 3) -> EmbeddedGraph:
    """Random maximal planar graph on n vertices with its embedding.

    Grows from K4 by uniform random face insertion, then mixes with random
    diagonal flips.  With ``min_degree_target=5`` the flip phase continues,
    rejecting flips that increase the degree-deficiency ``sum(max(0, 5 -
    deg))``, until minimum degree 5 is reached; failure to converge within
    the attempt budget raises GenerationError (never silently degraded).
    """
    if n < 4:
        raise ValueError("triangulations need n >= 4")
    if min_degree_target not in (3, 5):
        raise ValueError("min_degree_target must be 3 or 5")
    if min_degree_target == 5 and (n < 12 or n == 13):
        raise GenerationError(
            f"no triangulation on {n} vertices has minimum degree 5"
        )
    rng = random.Random(seed)
    tri = _Triangulation()
    while len(tri.rot) < n:
        tri.insert_into_face(rng.randrange(len(tri.faces)))
    # mixing flips; face list is stale after flips, so work from rotations only
    flips_done = 0
    attempts = 0
    target_flips = 3 * n
    while flips_done < target_flips and attempts < 30 * target_flips:
        attempts += 1
        a, b = tri.random_edge(rng)
        cand = tri.flip_candidates(a, b)
        if cand is None:
            continue
        x, y = cand
        tri.flip(a, b, x, y)
        flips_done += 1
    if min_degree_target == 5:
        _descend_to_min_degree5(tri, rng, n, seed)
    return tri.to_embedded()


def _descend_to_min_degree5(tri: "_Triangulation", rng: random.Random, n: int, seed: int) -> None:
    """Flip until minimum degree 5, preferring flips that raise a deficient
    vertex: flipping the opposite edge of a triangle at v gives v one more
    neighbour.  Moves that do not increase the total deficiency are
    accepted, plus a small uphill fraction to escape plateaus."""

    def short(v: int) -> int:
        return max(0, 5 - len(tri.rot[v]))

    deficit = sum(short(v) for v in range(len(tri.rot)))
    pool = [v for v in range(len(tri.rot)) if short(v)]
    budget = 400 * n + 40000
    attempts = 0
    while deficit > 0 and attempts < budget:
        attempts += 1
        # lazy-clean random pick from the deficient pool
        while pool:
            i = rng.randrange(len(pool))
            v = pool[i]
            if short(v):
                break
            pool[i] = pool[-1]
            pool.pop()
        else:
            raise GenerationError("deficiency bookkeeping corrupt")
        rv = tri.rot[v]
        j = rng.randrange(len(rv))
        a, b = rv[j], rv[(j + 1) % len(rv)]
        cand = tri.flip_candidates(a, b)
        if cand is None:
            continue
        x, y = cand
        if v not in (x, y):
            continue  # not a link edge of v in flippable position
        quad = {a, b, x, y}
        before = sum(short(u) for u in quad)
        after = (
            max(0, 5 - (len(tri.rot[a]) - 1))
            + max(0, 5 - (len(tri.rot[b]) - 1))
            + max(0, 5 - (len(tri.rot[x]) + 1))
            + max(0, 5 - (len(tri.rot[y]) + 1))
        )
        delta = after - before
        if delta <= 0 or rng.random() < 0.03:
            tri.flip(a, b, x, y)
            deficit += delta
            for u in quad:
                if short(u):
                    pool.append(u)
    if deficit > 0:
        raise GenerationError(
            f"could not reach minimum degree 5 for n={n}, seed={seed} "
            f"within {budget} flip attempts"
        )


# ---------------------------------------------------------------------------
# Exhaustive enumeration
# ---------------------------------------------------------------------------


def _stacked_rotation(n: int) -> List[List[int]]:
    tri = _Triangulation()
    while len(tri.rot) < n:
        tri.insert_into_face(0)
    return [list(r) for r in tri.rot]


def _flip_children(rot: List[List[int]]) -> Iterator[Tuple[Tuple[int, ...], ...]]:
    n = len(rot)
    adj = [set(r) for r in rot]
    for a in range(n):
        for b in rot[a]:
            if b < a:
                continue
            ra, rb = rot[a], rot[b]
            x = rb[(rb.index(a) + 1) % len(rb)]
            y = ra[(ra.index(b) + 1) % len(ra)]
            if x == y or y in adj[x]:
                continue
            child = [list(r) for r in rot]
            child[a].remove(b)
            child[b].remove(a)
            child[x].insert(child[x].index(b) + 1, y)
            child[y].insert(child[y].index(a) + 1, x)
            yield tuple(tuple(r) for r in child)


def all_triangulations(n: int) -> Iterator[EmbeddedGraph]:
    """All maximal planar graphs on n vertices, one per isomorphism class.

    Breadth-first search over diagonal flips starting from the stacked
    triangulation; by Wagner's theorem the flip graph is connected, so the
    search is exhaustive.  Deduplication uses the canonical rotation code,
    complete for 3-connected planar graphs."""
    if n < 4:
        raise ValueError("triangulations need n >= 4")
    start = tuple(tuple(r) for r in _stacked_rotation(n))
    seen = {kernels.rot_canon([list(r) for r in start])}
    queue = [start]
    qi = 0
    while qi < len(queue):
        rot = queue[qi]
        qi += 1
        g = Graph.from_adjacency({v: rot[v] for v in range(n)})
        yield build_embedded(g, {v: rot[v] for v in range(n)})
        for child in _flip_children([list(r) for r in rot]):
            code = kernels.rot_canon([list(r) for r in child])
            if code not in seen:
                seen.add(code)
                queue.append(child)


def _masks_connected(n: int, masks: Sequence[int]) -> bool:
    seen = 1
    frontier = 1
    full = (1 << n) - 1
    while frontier:
        nxt = 0
        m = frontier
        while m:
            v = (m & -m).bit_length() - 1
            m &= m - 1
            nxt |= masks[v]
        frontier = nxt & ~seen
        seen |= frontier
    return seen == full


def all_connected_planar_graphs(n: int) -> Iterator[Graph]:
    """All connected planar graphs on n vertices, one per isomorphism class.

    Downward edge-deletion BFS from the maximal planar graphs: any connected
    planar graph spans some triangulation, and deleting only the surplus
    edges keeps every intermediate graph connected."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        yield Graph.from_edges([], vertices=[0])
        return
    if n == 2:
        yield Graph.from_edges([(0, 1)])
        return

    def to_masks(g: Graph) -> Tuple[int, ...]:
        masks = [0] * n
        for u, v in g.edges():
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return tuple(masks)

    if n == 3:
        seeds = [to_masks(Graph.from_edges([(0, 1), (1, 2), (0, 2)]))]
    else:
        seeds = [to_masks(eg.graph) for eg in all_triangulations(n)]
    seen = set()
    queue = []
    for masks in seeds:
        code = kernels.graph_canon(n, list(masks))
        if code not in seen:
            seen.add(code)
            queue.append(masks)
    qi = 0
    while qi < len(queue):
        masks = queue[qi]
        qi += 1
        edges = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if (masks[u] >> v) & 1
        ]
        yield Graph.from_edges(edges, vertices=range(n))
        for u, v in edges:
            child = list(masks)
            child[u] &= ~(1 << v)
            child[v] &= ~(1 << u)
            if not _masks_connected(n, child):
                continue
            code = kernels.graph_canon(n, child)
            if code not in seen:
                seen.add(code)
                queue.append(tuple(child))


# ---------------------------------------------------------------------------
# Stream ingestion
# ---------------------------------------------------------------------------


@dataclass
class StreamRecord:
    """One graph from an input stream, with lazy planarity/embedding."""

    index: int
    graph: Graph
    embedding: Optional[EmbeddedGraph] = None
    _planar: Optional[bool] = None

    @property
    def planar(self) -> bool:
        if self.embedding is not None:
            return True
        if self._planar is None:
            self._planar = is_planar(self.graph)
        return self._planar

    def ensure_embedding(self) -> EmbeddedGraph:
        if self.embedding is None:
            from .embedding import embed_graph

            self.embedding = embed_graph(self.graph)
        return self.embedding


def ingest_stream(path: str, format: str) -> Iterator[StreamRecord]:
    """Yield StreamRecords from a graph6 or planar_code file.

    graph6 records get an embedding computed on demand; non-planar records
    are yielded with ``planar == False`` so the caller can skip or assert.
    Malformed input aborts with the byte offset in the FormatError."""
    if format == "graph6":
        with open(path, "rb") as fh:
            for i, g in enumerate(read_graph6(fh)):
                yield StreamRecord(index=i, graph=g)
    elif format == "planar_code":
        with open(path, "rb") as fh:
            data = fh.read()
        for i, eg in enumerate(read_planar_code(data)):
            yield StreamRecord(index=i, graph=eg.graph, embedding=eg, _planar=True)
    else:
        raise FormatError(f"unknown stream format {format!r}")

"""Combinatorial plane embeddings: rotation systems, faces, planar_code.

An embedding is a rotation system: for every vertex, a cyclic order of its
neighbours.  Faces are traced with the standard dart rule: the successor of
the dart (u -> v) is (v -> w) where w follows u in v's rotation.  A rotation
system is accepted as plane iff every connected component with edges
satisfies Euler's relation V - E + F = 2 under this traversal.

Isolated vertices get a synthetic empty face (length 0, anchored at the
vertex) so that charge bookkeeping stays exactly 12 per connected component.

The embedding of an abstract graph is computed with networkx's planarity
test (a mature LR-planarity implementation); its output is still validated
against Euler's relation here, so correctness never rests on trusting the
embedder.  Inputs that arrive as planar_code carry their own embedding.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

import networkx as nx

from .errors import FormatError, NotPlanarError
from .graphs import Graph

RotationSystem = Dict[int, Tuple[int, ...]]

PLANAR_CODE_HEADER = b">>planar_code<<"


@dataclass(frozen=True)
class Face:
    """A face as its boundary walk of directed edges (darts).

    ``anchor`` is only set for the synthetic empty face of an isolated
    vertex.
    """

    boundary: Tuple[Tuple[int, int], ...]
    anchor: Optional[int] = None

    @property
    def length(self) -> int:
        return len(self.boundary)

    @property
    def vertices(self) -> Tuple[int, ...]:
        if not self.boundary:
            return (self.anchor,) if self.anchor is not None else ()
        return tuple(u for u, _ in self.boundary)


@dataclass(frozen=True)
class EmbeddedGraph:
    """Graph + rotation system + derived face structure."""

    graph: Graph
    rotation: RotationSystem
    faces: Tuple[Face, ...]
    face_incidence: Dict[int, Tuple[Tuple[int, Optional[int], Optional[int]], ...]]
    dart_face: Dict[Tuple[int, int], int] = field(repr=False)

    def degree(self, v: int) -> int:
        return self.graph.degree(v)

    def face_at_corner(self, v: int, i: int) -> int:
        """Face index of the corner between rotation[v][i] and rotation[v][i+1]."""
        return self.dart_face[(self.rotation[v][i], v)]


def _validate_rotation(g: Graph, rotation: RotationSystem) -> None:
    if set(rotation) != set(g.vertices):
        raise FormatError("rotation system does not cover the vertex set")
    for v, rot in rotation.items():
        if len(set(rot)) != len(rot):
            raise FormatError(f"repeated neighbour in rotation of {v}")
        if set(rot) != set(g.neighbors(v)):
            raise FormatError(f"rotation of {v} does not match its neighbour set")


def faces_from_rotation(g: Graph, rotation: RotationSystem) -> List[Face]:
    """Trace all faces of the rotation system (no planarity check here)."""
    _validate_rotation(g, rotation)
    pos = {v: {u: i for i, u in enumerate(rot)} for v, rot in rotation.items()}
    unused = {(u, v) for v in rotation for u in rotation[v]}
    faces = []
    for v in sorted(rotation):
        if not rotation[v]:
            faces.append(Face(boundary=(), anchor=v))
    for start in sorted(unused):
        if start not in unused:
            continue
        walk = []
        dart = start
        while dart in unused:
            unused.discard(dart)
            walk.append(dart)
            u, v = dart
            rot = rotation[v]
            dart = (v, rot[(pos[v][u] + 1) % len(rot)])
        if dart != start:
            raise FormatError("face traversal did not close; rotation corrupt")
        faces.append(Face(boundary=tuple(walk)))
    return faces


def build_embedded(g: Graph, rotation: RotationSystem, require_planar: bool = True) -> EmbeddedGraph:
    """Assemble the full embedding; verifies Euler's relation per component."""
    rotation = {v: tuple(rot) for v, rot in rotation.items()}
    faces = faces_from_rotation(g, rotation)
    if require_planar:
        _check_euler(g, faces)
    dart_face = {}
    for idx, face in enumerate(faces):
        for dart in face.boundary:
            dart_face[dart] = idx
    incidence = {}
    for v in sorted(rotation):
        rot = rotation[v]
        d = len(rot)
        if d == 0:
            iso = next(i for i, f in enumerate(faces) if f.anchor == v)
            incidence[v] = ((iso, None, None),)
        else:
            incidence[v] = tuple(
                (dart_face[(rot[i], v)], rot[i], rot[(i + 1) % d]) for i in range(d)
            )
    return EmbeddedGraph(
        graph=g,
        rotation=rotation,
        faces=tuple(faces),
        face_incidence=incidence,
        dart_face=dart_face,
    )


def _check_euler(g: Graph, faces: List[Face]) -> None:
    from .graphs import connected_components

    comp_of = {}
    comps = connected_components(g)
    for ci, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = ci
    v_count = [len(c) for c in comps]
    e_count = [0] * len(comps)
    f_count = [0] * len(comps)
    for u, v in g.edges():
        e_count[comp_of[u]] += 1
    for face in faces:
        anchor = face.anchor if face.anchor is not None else face.boundary[0][0]
        f_count[comp_of[anchor]] += 1
    for ci in range(len(comps)):
        if v_count[ci] - e_count[ci] + f_count[ci] != 2:
            raise NotPlanarError(
                f"component fails Euler's relation: V={v_count[ci]} "
                f"E={e_count[ci]} F={f_count[ci]}"
            )


def embed(g: Graph) -> RotationSystem:
    """Compute a plane rotation system, or raise NotPlanarError.

    Deterministic for a fixed input (nodes and edges are fed to the
    planarity algorithm in sorted order).
    """
    if len(g) == 0:
        return {}
    ng = nx.Graph()
    ng.add_nodes_from(g.vertex_list)
    ng.add_edges_from(g.edges())
    ok, emb = nx.check_planarity(ng, counterexample=False)
    if not ok:
        raise NotPlanarError(f"graph with {len(g)} vertices is not planar")
    data = emb.get_data()
    return {v: tuple(data[v]) for v in g.vertex_list}


def embed_graph(g: Graph) -> EmbeddedGraph:
    """embed() + face structure in one step."""
    return build_embedded(g, embed(g))


def is_planar(g: Graph) -> bool:
    if len(g) == 0:
        return True
    ng = nx.Graph()
    ng.add_nodes_from(g.vertex_list)
    ng.add_edges_from(g.edges())
    return nx.check_planarity(ng, counterexample=False)[0]


def induced_embedding(eg: EmbeddedGraph, keep: Iterable[int]) -> EmbeddedGraph:
    """Restrict an embedding to a vertex subset (still plane: deleting
    vertices from a plane drawing keeps it plane)."""
    keep_set = frozenset(keep)
    sub = eg.graph.induced(keep_set)
    rotation = {
        v: tuple(u for u in eg.rotation[v] if u in keep_set) for v in keep_set
    }
    return build_embedded(sub, rotation)


def nontriangular_face_count(eg: EmbeddedGraph, v: int) -> int:
    """Incidences of v on faces of length >= 4, counted per boundary visit."""
    return sum(1 for f, _, _ in eg.face_incidence[v] if eg.faces[f].length >= 4)


def consecutive_five_neighbours(eg: EmbeddedGraph, v: int) -> Tuple[bool, Optional[int]]:
    """Whether v has exactly three degree-5 neighbours, all consecutive in
    its rotation.  Returns (flag, central neighbour or None)."""
    rot = eg.rotation[v]
    d = len(rot)
    fives = [i for i, u in enumerate(rot) if eg.graph.degree(u) == 5]
    if len(fives) != 3 or d < 3:
        return False, None
    spots = set(fives)
    for p in fives:
        if {p, (p + 1) % d, (p + 2) % d} == spots:
            return True, rot[(p + 1) % d]
    return False, None


def planar_dual(eg: EmbeddedGraph) -> EmbeddedGraph:
    """Dual embedding (faces become vertices).  Intended for 3-connected
    inputs whose dual is simple; validated by construction checks."""
    edges = []
    rotation = {}
    for idx, face in enumerate(eg.faces):
        nbrs = tuple(eg.dart_face[(v, u)] for (u, v) in face.boundary)
        rotation[idx] = nbrs
        for other in nbrs:
            if idx < other:
                edges.append((idx, other))
    dual = Graph.from_edges(edges, vertices=range(len(eg.faces)))
    return build_embedded(dual, rotation)


# ---------------------------------------------------------------------------
# planar_code (plantri's binary format)
# ---------------------------------------------------------------------------


def planar_code_bytes(eg: EmbeddedGraph) -> bytes:
    """Encode one embedded graph.  Vertices are renumbered 1..n in id order;
    entries are single bytes for n <= 255, else a 0 marker starts the record
    and every number is two bytes little-endian."""
    verts = eg.graph.vertex_list
    n = len(verts)
    index = {v: i + 1 for i, v in enumerate(verts)}
    wide = n > 255
    out = bytearray()

    def put(x: int) -> None:
        if wide:
            out.extend(x.to_bytes(2, "little"))
        else:
            out.append(x)

    if wide:
        out.append(0)
    put(n)
    for v in verts:
        for u in eg.rotation[v]:
            put(index[u])
        put(0)
    return bytes(out)


def write_planar_code(fileobj, embedded_graphs: Iterable[EmbeddedGraph], header: bool = True) -> int:
    count = 0
    if header:
        fileobj.write(PLANAR_CODE_HEADER)
    for eg in embedded_graphs:
        fileobj.write(planar_code_bytes(eg))
        count += 1
    return count


def read_planar_code(data: bytes) -> Iterator[EmbeddedGraph]:
    """Lazily decode a planar_code byte string; FormatError carries the byte
    offset of the first malformed record."""
    pos = 0
    if data.startswith(PLANAR_CODE_HEADER):
        pos = len(PLANAR_CODE_HEADER)
    total = len(data)
    while pos < total:
        start = pos
        wide = data[pos] == 0
        if wide:
            pos += 1

        def take() -> int:
            nonlocal pos
            if wide:
                if pos + 2 > total:
                    raise FormatError("truncated planar_code entry", offset=start)
                val = int.from_bytes(data[pos : pos + 2], "little")
                pos += 2
            else:
                if pos >= total:
                    raise FormatError("truncated planar_code entry", offset=start)
                val = data[pos]
                pos += 1
            return val

        n = take()
        if n == 0:
            raise FormatError("planar_code record with zero vertices", offset=start)
        rotation = {}
        for v in range(n):
            rot = []
            while True:
                x = take()
                if x == 0:
                    break
                if not 1 <= x <= n:
                    raise FormatError(f"planar_code neighbour {x} out of range", offset=start)
                rot.append(x - 1)
            rotation[v] = tuple(rot)
        adjacency = {v: rotation[v] for v in range(n)}
        try:
            g = Graph.from_adjacency(adjacency)
            yield build_embedded(g, rotation)
        except (ValueError, NotPlanarError, FormatError) as exc:
            raise FormatError(f"invalid planar_code record: {exc}", offset=start) from None


def read_planar_code_file(path) -> Iterator[EmbeddedGraph]:
    with open(path, "rb") as fh:
        data = fh.read()
    yield from read_planar_code(data)

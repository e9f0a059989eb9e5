"""Simple undirected graphs with collect/delete semantics and potentials.

The central objects:

* :class:`Graph` -- immutable simple graph over non-negative integer vertex
  ids.  Ids are arbitrary (deleting a vertex leaves the others' ids intact),
  which keeps extraction certificates replayable against the original input.
* :func:`collect_closure` -- greedily remove ("collect") vertices of degree
  at most k until stuck.  The stuck remainder is the (k+1)-core and does not
  depend on removal order; the order used here is deterministic:
  (degree, id) ascending.
* :func:`gamma_breakdown` -- the exact potential
  ``gamma = |V|/12 + phi/36 + tc/18`` with ``phi = sum(deg(v) - 5)`` and
  ``tc`` the number of tree components.  All potentials are
  :class:`fractions.Fraction`; floating point is never used in any check.

graph6 reading/writing (McKay's ASCII format) lives here as well.
"""

from array import array
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, Iterator, List, Tuple

from . import kernels
from .errors import FormatError


class Graph:
    """Immutable simple undirected graph with stable integer vertex ids."""

    __slots__ = ("_adj",)

    def __init__(self, adjacency: Dict[int, FrozenSet[int]]):
        self._adj = adjacency

    @classmethod
    def from_edges(cls, edges: Iterable[Tuple[int, int]], vertices: Iterable[int] = ()) -> "Graph":
        adj: Dict[int, set] = {int(v): set() for v in vertices}
        for u, v in edges:
            u = int(u)
            v = int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        return cls({v: frozenset(nbrs) for v, nbrs in adj.items()})

    @classmethod
    def from_adjacency(cls, adjacency: Dict[int, Iterable[int]]) -> "Graph":
        adj = {int(v): frozenset(int(u) for u in nbrs) for v, nbrs in adjacency.items()}
        for v, nbrs in adj.items():
            if v in nbrs:
                raise ValueError(f"self-loop at vertex {v}")
            for u in nbrs:
                if u not in adj or v not in adj[u]:
                    raise ValueError(f"asymmetric adjacency at edge ({v}, {u})")
        return cls(adj)

    @property
    def vertices(self) -> FrozenSet[int]:
        return frozenset(self._adj)

    @property
    def vertex_list(self) -> List[int]:
        """Vertices in ascending id order."""
        return sorted(self._adj)

    def __len__(self) -> int:
        return len(self._adj)

    def __contains__(self, v: int) -> bool:
        return v in self._adj

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self._adj == other._adj

    def __hash__(self):
        raise TypeError("Graph is not hashable; use a canonical form")

    def neighbors(self, v: int) -> FrozenSet[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj.get(u, ())

    @property
    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self._adj.values()) // 2

    def edges(self) -> Iterator[Tuple[int, int]]:
        for v in sorted(self._adj):
            for u in sorted(self._adj[v]):
                if v < u:
                    yield (v, u)

    def induced(self, keep: Iterable[int]) -> "Graph":
        keep_set = frozenset(keep)
        missing = keep_set - self._adj.keys()
        if missing:
            raise KeyError(f"unknown vertices {sorted(missing)}")
        return Graph({v: self._adj[v] & keep_set for v in keep_set})

    def without_vertex(self, v: int) -> "Graph":
        if v not in self._adj:
            raise KeyError(f"unknown vertex {v}")
        adj = {}
        for u, nbrs in self._adj.items():
            if u == v:
                continue
            adj[u] = nbrs - {v} if v in nbrs else nbrs
        return Graph(adj)

    def dense_index(self):
        """(sorted vertex list, id->index map, CSR indptr, CSR indices)."""
        verts = sorted(self._adj)
        index = {v: i for i, v in enumerate(verts)}
        nbr_lists = [sorted(index[u] for u in self._adj[v]) for v in verts]
        indptr, indices = kernels.build_csr(len(verts), nbr_lists)
        return verts, index, indptr, indices

    def __repr__(self) -> str:
        return f"Graph(n={len(self._adj)}, m={self.edge_count})"


@dataclass(frozen=True)
class CollectResult:
    """Outcome of a collection closure: the removal order and the stuck rest."""

    order: Tuple[int, ...]
    remainder: Graph


@dataclass(frozen=True)
class GammaBreakdown:
    """The potential gamma = |V|/12 + phi/36 + tc/18 with its ingredients."""

    vertex_count: int
    phi: int
    tree_components: int
    gamma: Fraction


def collect_closure(g: Graph, k: int) -> CollectResult:
    """Collect vertices of degree <= k greedily until none remains collectable.

    The remainder is the (k+1)-core of g: the maximal induced subgraph of
    minimum degree >= k+1 (possibly empty).  The collected set is
    order-independent; the order returned is (degree, id) ascending.
    """
    verts, _, indptr, indices = g.dense_index()
    n = len(verts)
    degs = array("i", (indptr[i + 1] - indptr[i] for i in range(n)))
    alive = bytearray(b"\x01" * n)
    order, _ = kernels.peel(indptr, indices, degs, alive, k, range(n))
    collected = tuple(verts[i] for i in order)
    remainder = g.induced(verts[i] for i in range(n) if alive[i])
    return CollectResult(order=collected, remainder=remainder)


def is_k_degenerate(g: Graph, k: int) -> bool:
    """True iff the whole graph can be collected at threshold k."""
    return len(collect_closure(g, k).remainder) == 0


def delete_vertex(g: Graph, v: int) -> Graph:
    """Remove v and its incident edges.  Unknown v raises KeyError."""
    return g.without_vertex(v)


def average_degree(g: Graph) -> Fraction:
    """2|E|/|V| as an exact rational; raises ValueError on the empty graph."""
    if len(g) == 0:
        raise ValueError("average degree of the empty graph is undefined")
    return Fraction(2 * g.edge_count, len(g))


def connected_components(g: Graph) -> List[FrozenSet[int]]:
    """Partition of the vertex set into maximal connected pieces."""
    seen = set()
    out = []
    for start in sorted(g.vertices):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for u in g.neighbors(v):
                if u not in comp:
                    comp.add(u)
                    stack.append(u)
        seen |= comp
        out.append(frozenset(comp))
    return out


def gamma_breakdown(g: Graph) -> GammaBreakdown:
    """Exact potential of g; tree components counted per |E| = |V| - 1."""
    n = len(g)
    phi = 2 * g.edge_count - 5 * n
    tc = 0
    for comp in connected_components(g):
        edges = sum(len(g.neighbors(v) & comp) for v in comp) // 2
        if edges == len(comp) - 1:
            tc += 1
    return GammaBreakdown(
        vertex_count=n,
        phi=phi,
        tree_components=tc,
        gamma=Fraction(n, 12) + Fraction(phi, 36) + Fraction(tc, 18),
    )


def gamma(g: Graph) -> Fraction:
    return gamma_breakdown(g).gamma


# ---------------------------------------------------------------------------
# graph6 (McKay's ASCII format, bit-exact)
# ---------------------------------------------------------------------------

_G6_HEADER = b">>graph6<<"


def _g6_size_bytes(n: int) -> bytes:
    if n < 0:
        raise ValueError("negative vertex count")
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126, 63 + ((n >> 12) & 63), 63 + ((n >> 6) & 63), 63 + (n & 63)])
    if n <= 68719476735:
        return bytes([126, 126] + [63 + ((n >> s) & 63) for s in (30, 24, 18, 12, 6, 0)])
    raise ValueError("graph too large for graph6")


def _g6_parse_size(data: bytes, pos: int):
    if pos >= len(data):
        raise FormatError("truncated graph6 record", offset=pos)
    b = data[pos]
    if b != 126:
        return b - 63, pos + 1
    if pos + 1 < len(data) and data[pos + 1] == 126:
        chunk = data[pos + 2 : pos + 8]
        if len(chunk) < 6:
            raise FormatError("truncated graph6 size", offset=pos)
        n = 0
        for c in chunk:
            n = (n << 6) | (c - 63)
        return n, pos + 8
    chunk = data[pos + 1 : pos + 4]
    if len(chunk) < 3:
        raise FormatError("truncated graph6 size", offset=pos)
    n = 0
    for c in chunk:
        n = (n << 6) | (c - 63)
    return n, pos + 4


def graph6_bytes(g: Graph) -> bytes:
    """Encode a graph whose ids need not be contiguous; order is id-ascending."""
    verts = g.vertex_list
    n = len(verts)
    out = bytearray(_g6_size_bytes(n))
    row_sets = [g.neighbors(v) for v in verts]
    acc = 0
    nbits = 0
    for j in range(1, n):
        row = row_sets[j]
        for i in range(j):
            acc = (acc << 1) | (1 if verts[i] in row else 0)
            nbits += 1
            if nbits == 6:
                out.append(63 + acc)
                acc = 0
                nbits = 0
    if nbits:
        out.append(63 + (acc << (6 - nbits)))
    return bytes(out)


def graph6_loads(record) -> Graph:
    """Decode one graph6 record (str or bytes, optional header, no newline)."""
    data = record.encode("ascii") if isinstance(record, str) else bytes(record)
    if data.startswith(_G6_HEADER):
        data = data[len(_G6_HEADER):]
    data = data.strip()
    n, pos = _g6_parse_size(data, 0)
    need = (n * (n - 1) // 2 + 5) // 6
    body = data[pos : pos + need]
    if len(body) < need:
        raise FormatError(f"graph6 record too short for n={n}", offset=pos + len(body))
    for off, c in enumerate(body):
        if not 63 <= c <= 126:
            raise FormatError(f"invalid graph6 byte {c:#x}", offset=pos + off)
    edges = []
    bit = 0
    for j in range(1, n):
        for i in range(j):
            byte = body[bit // 6]
            if (byte - 63) >> (5 - bit % 6) & 1:
                edges.append((i, j))
            bit += 1
    return Graph.from_edges(edges, vertices=range(n))


def write_graph6(fileobj, graphs: Iterable[Graph], header: bool = False) -> int:
    """Write graphs one per line; returns the number written."""
    count = 0
    if header:
        fileobj.write(_G6_HEADER + b"\n")
    for g in graphs:
        fileobj.write(graph6_bytes(g) + b"\n")
        count += 1
    return count


def read_graph6(fileobj) -> Iterator[Graph]:
    """Lazily decode a graph6 stream; malformed lines raise FormatError."""
    offset = 0
    for line in fileobj:
        raw = line.rstrip(b"\n")
        if raw and raw != _G6_HEADER:
            try:
                yield graph6_loads(raw)
            except FormatError as exc:
                raise FormatError(str(exc), offset=offset) from None
        offset += len(line)

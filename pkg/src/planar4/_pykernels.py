"""Pure-Python reference kernels.

These are the hot inner loops of the package: greedy low-degree peeling
(collection closure), candidate-deletion evaluation for the reduction
search, and the canonical codes used to deduplicate exhaustively generated
graphs.  `planar4.kernels` transparently swaps in the compiled versions from
`planar4._speedups` when the extension is importable; both implementations
must stay behaviourally identical (see tests/test_kernels.py).

Graphs enter the kernels in CSR form: `indptr`/`indices` arrays over dense
vertex indices 0..n-1, plus parallel `degs` (current degree) and `alive`
(0/1 bytearray) state.  All functions are deterministic: peeling always
removes the (degree, id)-lexicographically smallest collectable vertex.
"""

from array import array
from heapq import heappush, heappop


def build_csr(n, adjacency):
    """Build (indptr, indices) int arrays from neighbours indexed 0..n-1."""
    indptr = array("i", [0] * (n + 1))
    for v in range(n):
        indptr[v + 1] = indptr[v] + len(adjacency[v])
    indices = array("i", [0] * indptr[n])
    pos = list(indptr)
    for v in range(n):
        for u in adjacency[v]:
            indices[pos[v]] = u
            pos[v] += 1
    return indptr, indices


def peel(indptr, indices, degs, alive, k, seeds):
    """Collect every vertex whose degree can be driven to <= k, mutating state.

    Removes vertices in (current degree, id) ascending order starting from
    `seeds`; cascades as degrees drop.  Returns (order, removed_edges) where
    removed_edges counts graph edges deleted by the removals.
    """
    heap = []
    for v in seeds:
        if alive[v] and degs[v] <= k:
            heappush(heap, (degs[v], v))
    order = []
    removed_edges = 0
    while heap:
        d, v = heappop(heap)
        if not alive[v] or degs[v] != d:
            continue
        alive[v] = 0
        order.append(v)
        removed_edges += d
        for i in range(indptr[v], indptr[v + 1]):
            u = indices[i]
            if alive[u]:
                du = degs[u] - 1
                degs[u] = du
                if du <= k:
                    heappush(heap, (du, u))
    return order, removed_edges


def evaluate_deletion(indptr, indices, degs, alive, w, k):
    """Delete w, run the collection cascade, undo everything.

    Returns (collected_count, removed_edges) where removed_edges includes
    the edges incident to w itself.  State is restored before returning.
    """
    trail = []
    removed_edges = 0
    alive[w] = 0
    heap = []
    for i in range(indptr[w], indptr[w + 1]):
        u = indices[i]
        if alive[u]:
            du = degs[u] - 1
            degs[u] = du
            removed_edges += 1
            if du <= k:
                heappush(heap, (du, u))
    collected = 0
    while heap:
        d, v = heappop(heap)
        if not alive[v] or degs[v] != d:
            continue
        alive[v] = 0
        trail.append(v)
        collected += 1
        removed_edges += d
        for i in range(indptr[v], indptr[v + 1]):
            u = indices[i]
            if alive[u]:
                du = degs[u] - 1
                degs[u] = du
                if du <= k:
                    heappush(heap, (du, u))
    for v in reversed(trail):
        alive[v] = 1
        for i in range(indptr[v], indptr[v + 1]):
            u = indices[i]
            if alive[u]:
                degs[u] += 1
    alive[w] = 1
    for i in range(indptr[w], indptr[w + 1]):
        u = indices[i]
        if alive[u]:
            degs[u] += 1
    return collected, removed_edges


def apply_deletion(indptr, indices, degs, alive, w, k):
    """Delete w for real and collect the cascade; returns (order, removed_edges)."""
    alive[w] = 0
    w_edges = 0
    seeds = []
    for i in range(indptr[w], indptr[w + 1]):
        u = indices[i]
        if alive[u]:
            degs[u] -= 1
            w_edges += 1
            seeds.append(u)
    order, cascade_edges = peel(indptr, indices, degs, alive, k, seeds)
    return order, w_edges + cascade_edges


def rot_canon(rot):
    """Canonical byte code of a connected rotation system, up to reflection.

    `rot` is a list of neighbour sequences (dense ids).  Two connected
    embedded graphs get equal codes iff some embedding isomorphism (possibly
    orientation-reversing) maps one to the other.  For 3-connected planar
    graphs this coincides with graph isomorphism (the embedding is unique).
    """
    n = len(rot)
    if n >= 255:
        raise ValueError("rot_canon supports fewer than 255 vertices")
    degs = [len(r) for r in rot]
    best_key = None
    starts = []
    for u in range(n):
        du = degs[u]
        for v in rot[u]:
            key = (du, degs[v])
            if best_key is None or key < best_key:
                best_key = key
                starts = [(u, v)]
            elif key == best_key:
                starts.append((u, v))
    best = None
    for u0, v0 in starts:
        for direction in (1, -1):
            code = _rot_code(rot, degs, u0, v0, direction, best)
            if code is not None:
                best = code
    return bytes(best)


def _rot_code(rot, degs, u0, v0, direction, cutoff):
    """BFS code for one (start dart, direction); None when provably >= cutoff."""
    lab = [0] * len(rot)
    entry = [0] * len(rot)
    order = [u0]
    lab[u0] = 1
    entry[u0] = v0
    out = bytearray()
    i = 0
    pos = 0
    better = cutoff is None
    while i < len(order):
        x = order[i]
        i += 1
        r = rot[x]
        d = degs[x]
        j = r.index(entry[x])
        for t in range(d):
            y = r[(j + direction * t) % d]
            ly = lab[y]
            if not ly:
                lab[y] = ly = len(order) + 1
                order.append(y)
                entry[y] = x
            out.append(ly)
        out.append(0)
        if not better:
            m = min(len(out), len(cutoff))
            while pos < m:
                a = out[pos]
                b = cutoff[pos]
                if a > b:
                    return None
                if a < b:
                    better = True
                    break
                pos += 1
    if not better and bytes(out) >= bytes(cutoff):
        return None
    return out


def graph_canon(n, adj):
    """Canonical form of a simple graph given as bitmask adjacency rows.

    Returns (n, packed upper-triangle int) minimising the adjacency matrix
    over a pruned search of vertex orderings.  Exact (no hashing); intended
    for small n (the exhaustive generators stay below n = 13).
    """
    if n == 0:
        return (0, 0)
    colors = _refine(n, adj, _initial_colors(n, adj))
    best = [None]
    _canon_search(n, adj, colors, best)
    return (n, best[0])


def _initial_colors(n, adj):
    return _colors_from_keys(n, [(adj[v].bit_count(),) for v in range(n)])


def _colors_from_keys(n, keys):
    rank = {key: i for i, key in enumerate(sorted(set(keys)))}
    return [rank[keys[v]] for v in range(n)]


def _refine(n, adj, colors):
    while True:
        ncolors = max(colors) + 1
        masks = [0] * ncolors
        for v in range(n):
            masks[colors[v]] |= 1 << v
        keys = []
        for v in range(n):
            row = adj[v]
            keys.append((colors[v],) + tuple((row & masks[c]).bit_count() for c in range(ncolors)))
        new = _colors_from_keys(n, keys)
        if new == colors:
            return colors
        colors = new


def _is_twin(adj, u, v):
    clear = ~((1 << u) | (1 << v))
    return adj[u] & clear == adj[v] & clear


def _canon_search(n, adj, colors, best):
    ncolors = max(colors) + 1
    if ncolors == n:
        perm = sorted(range(n), key=colors.__getitem__)
        code = 0
        bit = 0
        for i in range(n):
            ri = adj[perm[i]]
            for j in range(i + 1, n):
                if (ri >> perm[j]) & 1:
                    code |= 1 << bit
                bit += 1
        if best[0] is None or code < best[0]:
            best[0] = code
        return
    cells = {}
    for v in range(n):
        cells.setdefault(colors[v], []).append(v)
    target = min(c for c, vs in cells.items() if len(vs) > 1)
    cell = cells[target]
    reps = []
    for v in cell:
        if any(_is_twin(adj, u, v) for u in reps):
            continue  # swapping true twins is an automorphism
        reps.append(v)
        new_colors = []
        for u in range(n):
            c = colors[u]
            if c < target:
                new_colors.append(c)
            elif c == target:
                new_colors.append(target if u == v else target + 1)
            else:
                new_colors.append(c + 1)
        _canon_search(n, adj, _refine(n, adj, new_colors), best)

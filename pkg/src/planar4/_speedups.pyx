# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels.

Behaviourally identical to planar4._pykernels (the reference
implementation); tests/test_kernels.py enforces the equivalence.  The peel
heap keys are deg * n + id, whose ascending order coincides with the
reference (degree, id) tuple order.
"""

from libc.stdlib cimport free, malloc
from libc.string cimport memcmp, memcpy, memset

cdef extern from *:
    int __builtin_popcount(unsigned int x) nogil


# ---------------------------------------------------------------------------
# peeling / candidate evaluation
# ---------------------------------------------------------------------------


cdef inline void _hpush(long* heap, Py_ssize_t* size, long key) nogil:
    cdef Py_ssize_t i = size[0]
    cdef Py_ssize_t p
    cdef long tmp
    heap[i] = key
    size[0] = i + 1
    while i > 0:
        p = (i - 1) >> 1
        if heap[p] <= heap[i]:
            break
        tmp = heap[p]
        heap[p] = heap[i]
        heap[i] = tmp
        i = p


cdef inline long _hpop(long* heap, Py_ssize_t* size) nogil:
    cdef long top = heap[0]
    cdef Py_ssize_t n = size[0] - 1
    cdef Py_ssize_t i = 0, c
    cdef long tmp
    size[0] = n
    heap[0] = heap[n]
    while True:
        c = 2 * i + 1
        if c >= n:
            break
        if c + 1 < n and heap[c + 1] < heap[c]:
            c += 1
        if heap[i] <= heap[c]:
            break
        tmp = heap[i]
        heap[i] = heap[c]
        heap[c] = tmp
        i = c
    return top


def peel(indptr, indices, degs, alive, int k, seeds):
    """Collect every vertex drivable to degree <= k; see reference."""
    cdef int[:] ip = indptr
    cdef int[:] ix = indices
    cdef int[:] dg = degs
    cdef unsigned char[:] al = alive
    cdef long n = dg.shape[0]
    cdef Py_ssize_t cap = n + ix.shape[0] + 8
    cdef long* heap = <long*> malloc(cap * sizeof(long))
    cdef int* order = <int*> malloc((n + 1) * sizeof(int))
    cdef Py_ssize_t hsize = 0, osize = 0, i
    cdef long removed_edges = 0
    cdef long key
    cdef int v, u, d, du
    if heap == NULL or order == NULL:
        free(heap)
        free(order)
        raise MemoryError()
    try:
        for s in seeds:
            v = s
            if al[v] and dg[v] <= k:
                _hpush(heap, &hsize, (<long> dg[v]) * n + v)
        while hsize > 0:
            key = _hpop(heap, &hsize)
            v = <int> (key % n)
            d = <int> (key / n)
            if not al[v] or dg[v] != d:
                continue
            al[v] = 0
            order[osize] = v
            osize += 1
            removed_edges += d
            for i in range(ip[v], ip[v + 1]):
                u = ix[i]
                if al[u]:
                    du = dg[u] - 1
                    dg[u] = du
                    if du <= k:
                        _hpush(heap, &hsize, (<long> du) * n + u)
        out = [order[i] for i in range(osize)]
        return out, removed_edges
    finally:
        free(heap)
        free(order)


cdef long _cascade(int[:] ip, int[:] ix, int[:] dg, unsigned char[:] al,
                   int k, int w, int* trail, Py_ssize_t* tsize,
                   long* heap) nogil:
    """Delete w, cascade-collect into trail (excluding w); returns removed
    edge count including w's incident edges."""
    cdef long n = dg.shape[0]
    cdef Py_ssize_t hsize = 0, i
    cdef long removed_edges = 0
    cdef long key
    cdef int v, u, d, du
    al[w] = 0
    for i in range(ip[w], ip[w + 1]):
        u = ix[i]
        if al[u]:
            du = dg[u] - 1
            dg[u] = du
            removed_edges += 1
            if du <= k:
                _hpush(heap, &hsize, (<long> du) * n + u)
    tsize[0] = 0
    while hsize > 0:
        key = _hpop(heap, &hsize)
        v = <int> (key % n)
        d = <int> (key / n)
        if not al[v] or dg[v] != d:
            continue
        al[v] = 0
        trail[tsize[0]] = v
        tsize[0] += 1
        removed_edges += d
        for i in range(ip[v], ip[v + 1]):
            u = ix[i]
            if al[u]:
                du = dg[u] - 1
                dg[u] = du
                if du <= k:
                    _hpush(heap, &hsize, (<long> du) * n + u)
    return removed_edges


def evaluate_deletion(indptr, indices, degs, alive, int w, int k):
    """Delete w, cascade, undo; returns (collected, removed_edges)."""
    cdef int[:] ip = indptr
    cdef int[:] ix = indices
    cdef int[:] dg = degs
    cdef unsigned char[:] al = alive
    cdef long n = dg.shape[0]
    cdef Py_ssize_t cap = n + ix.shape[0] + 8
    cdef long* heap = <long*> malloc(cap * sizeof(long))
    cdef int* trail = <int*> malloc((n + 1) * sizeof(int))
    cdef Py_ssize_t tsize = 0, t, i
    cdef long removed_edges
    cdef int v, u
    if heap == NULL or trail == NULL:
        free(heap)
        free(trail)
        raise MemoryError()
    try:
        removed_edges = _cascade(ip, ix, dg, al, k, w, trail, &tsize, heap)
        for t in range(tsize - 1, -1, -1):
            v = trail[t]
            al[v] = 1
            for i in range(ip[v], ip[v + 1]):
                u = ix[i]
                if al[u]:
                    dg[u] += 1
        al[w] = 1
        for i in range(ip[w], ip[w + 1]):
            u = ix[i]
            if al[u]:
                dg[u] += 1
        return tsize, removed_edges
    finally:
        free(heap)
        free(trail)


def apply_deletion(indptr, indices, degs, alive, int w, int k):
    """Delete w permanently and collect the cascade; (order, removed_edges)."""
    cdef int[:] ip = indptr
    cdef int[:] ix = indices
    cdef int[:] dg = degs
    cdef unsigned char[:] al = alive
    cdef long n = dg.shape[0]
    cdef Py_ssize_t cap = n + ix.shape[0] + 8
    cdef long* heap = <long*> malloc(cap * sizeof(long))
    cdef int* trail = <int*> malloc((n + 1) * sizeof(int))
    cdef Py_ssize_t tsize = 0, t
    cdef long removed_edges
    if heap == NULL or trail == NULL:
        free(heap)
        free(trail)
        raise MemoryError()
    try:
        removed_edges = _cascade(ip, ix, dg, al, k, w, trail, &tsize, heap)
        out = [trail[t] for t in range(tsize)]
        return out, removed_edges
    finally:
        free(heap)
        free(trail)


# ---------------------------------------------------------------------------
# canonical rotation code
# ---------------------------------------------------------------------------


cdef void _rot_code(int n, int* ip, int* ix, int* deg, int u0, int v0,
                    int direction, unsigned char* out, int* lab, int* order,
                    int* entry) nogil:
    cdef int m = 1, qi = 0, pos = 0
    cdef int x, d, j, t, y, ly, idx
    memset(lab, 0, n * sizeof(int))
    order[0] = u0
    lab[u0] = 1
    entry[u0] = v0
    while qi < m:
        x = order[qi]
        qi += 1
        d = deg[x]
        j = 0
        while ix[ip[x] + j] != entry[x]:
            j += 1
        for t in range(d):
            idx = (j + direction * t) % d
            if idx < 0:
                idx += d
            y = ix[ip[x] + idx]
            ly = lab[y]
            if ly == 0:
                m += 1
                ly = m
                lab[y] = m
                order[m - 1] = y
                entry[y] = x
            out[pos] = <unsigned char> ly
            pos += 1
        out[pos] = 0
        pos += 1


def rot_canon(rot):
    """Canonical byte code of a connected rotation system (reflection
    included); identical output to the reference implementation."""
    cdef int n = len(rot)
    cdef int total = 0
    cdef int code_len
    cdef int* ip
    cdef int* ix
    cdef int* deg
    cdef unsigned char* best
    cdef unsigned char* cur
    cdef int* lab
    cdef int* order
    cdef int* entry
    cdef int v, u, i, pos, direction, best_du, best_dv
    cdef bint has_best = False
    if n >= 255:
        raise ValueError("rot_canon supports fewer than 255 vertices")
    for r in rot:
        total += len(r)
    code_len = total + n
    ip = <int*> malloc((n + 1) * sizeof(int))
    ix = <int*> malloc((total + 1) * sizeof(int))
    deg = <int*> malloc((n + 1) * sizeof(int))
    best = <unsigned char*> malloc(code_len + 1)
    cur = <unsigned char*> malloc(code_len + 1)
    lab = <int*> malloc((n + 1) * sizeof(int))
    order = <int*> malloc((n + 1) * sizeof(int))
    entry = <int*> malloc((n + 1) * sizeof(int))
    if ip == NULL or ix == NULL or deg == NULL or best == NULL or cur == NULL \
            or lab == NULL or order == NULL or entry == NULL:
        free(ip)
        free(ix)
        free(deg)
        free(best)
        free(cur)
        free(lab)
        free(order)
        free(entry)
        raise MemoryError()
    try:
        pos = 0
        ip[0] = 0
        for v in range(n):
            r = rot[v]
            deg[v] = len(r)
            for u_obj in r:
                ix[pos] = u_obj
                pos += 1
            ip[v + 1] = pos
        best_du = -1
        best_dv = -1
        for v in range(n):
            for i in range(ip[v], ip[v + 1]):
                u = ix[i]
                if best_du < 0 or deg[v] < best_du or (deg[v] == best_du and deg[u] < best_dv):
                    best_du = deg[v]
                    best_dv = deg[u]
        for v in range(n):
            if deg[v] != best_du:
                continue
            for i in range(ip[v], ip[v + 1]):
                u = ix[i]
                if deg[u] != best_dv:
                    continue
                for direction in (1, -1):
                    _rot_code(n, ip, ix, deg, v, u, direction, cur, lab, order, entry)
                    if not has_best or memcmp(cur, best, code_len) < 0:
                        memcpy(best, cur, code_len)
                        has_best = True
        return bytes(best[:code_len])
    finally:
        free(ip)
        free(ix)
        free(deg)
        free(best)
        free(cur)
        free(lab)
        free(order)
        free(entry)


# ---------------------------------------------------------------------------
# canonical graph form (bitmask adjacency; n <= 16 compiled, else fallback)
# ---------------------------------------------------------------------------


cdef struct _CanonState:
    int n
    unsigned int adj[16]
    unsigned long long best_hi
    unsigned long long best_lo
    bint has_best


cdef void _refine_c(_CanonState* st, int* colors) nogil:
    cdef int n = st.n
    cdef int keys[16][18]
    cdef int idx[16]
    cdef int rank[16]
    cdef unsigned int masks[16]
    cdef int v, c, ncolors, i, j, t, cmp_res, tmp
    cdef bint changed = True
    while changed:
        ncolors = 0
        for v in range(n):
            if colors[v] + 1 > ncolors:
                ncolors = colors[v] + 1
        for c in range(ncolors):
            masks[c] = 0
        for v in range(n):
            masks[colors[v]] |= 1u << v
        for v in range(n):
            keys[v][0] = colors[v]
            for c in range(ncolors):
                keys[v][c + 1] = __builtin_popcount(st.adj[v] & masks[c])
        for v in range(n):
            idx[v] = v
        for i in range(1, n):
            j = i
            while j > 0:
                cmp_res = 0
                for t in range(ncolors + 1):
                    if keys[idx[j - 1]][t] != keys[idx[j]][t]:
                        cmp_res = 1 if keys[idx[j - 1]][t] > keys[idx[j]][t] else -1
                        break
                if cmp_res > 0:
                    tmp = idx[j - 1]
                    idx[j - 1] = idx[j]
                    idx[j] = tmp
                    j -= 1
                else:
                    break
        rank[idx[0]] = 0
        for i in range(1, n):
            cmp_res = 0
            for t in range(ncolors + 1):
                if keys[idx[i - 1]][t] != keys[idx[i]][t]:
                    cmp_res = 1
                    break
            rank[idx[i]] = rank[idx[i - 1]] + cmp_res
        changed = False
        for v in range(n):
            if colors[v] != rank[v]:
                changed = True
            colors[v] = rank[v]


cdef void _canon_search_c(_CanonState* st, int* colors) nogil:
    cdef int n = st.n
    cdef int work[16]
    cdef int perm[16]
    cdef int cell[16]
    cdef int reps[16]
    cdef int branch[16]
    cdef int v, u, c, ncolors, target, cell_size, nreps, i, j, bit
    cdef unsigned long long hi, lo
    cdef unsigned int clear
    cdef bint better, twin
    for v in range(n):
        work[v] = colors[v]
    _refine_c(st, work)
    ncolors = 0
    for v in range(n):
        if work[v] + 1 > ncolors:
            ncolors = work[v] + 1
    if ncolors == n:
        for v in range(n):
            perm[work[v]] = v
        hi = 0
        lo = 0
        bit = 0
        for i in range(n):
            for j in range(i + 1, n):
                if (st.adj[perm[i]] >> perm[j]) & 1u:
                    if bit < 64:
                        lo |= (<unsigned long long> 1) << bit
                    else:
                        hi |= (<unsigned long long> 1) << (bit - 64)
                bit += 1
        better = not st.has_best
        if not better:
            if hi < st.best_hi or (hi == st.best_hi and lo < st.best_lo):
                better = True
        if better:
            st.best_hi = hi
            st.best_lo = lo
            st.has_best = True
        return
    target = -1
    cell_size = 0
    for c in range(n):
        cell_size = 0
        for v in range(n):
            if work[v] == c:
                cell[cell_size] = v
                cell_size += 1
        if cell_size > 1:
            target = c
            break
    nreps = 0
    for i in range(cell_size):
        v = cell[i]
        twin = False
        for j in range(nreps):
            u = reps[j]
            clear = ~((1u << u) | (1u << v))
            if (st.adj[u] & clear) == (st.adj[v] & clear):
                twin = True
                break
        if twin:
            continue
        reps[nreps] = v
        nreps += 1
        for u in range(n):
            c = work[u]
            if c < target:
                branch[u] = c
            elif c == target:
                branch[u] = target if u == v else target + 1
            else:
                branch[u] = c + 1
        _canon_search_c(st, branch)


def graph_canon(int n, adj):
    """Canonical (n, packed-bits) form; falls back to the reference
    implementation above 16 vertices."""
    cdef _CanonState st
    cdef int colors[16]
    cdef int degs[16]
    cdef int idx[16]
    cdef int v, i, j, tmp
    if n == 0:
        return (0, 0)
    if n > 16:
        from . import _pykernels

        return _pykernels.graph_canon(n, adj)
    st.n = n
    st.has_best = False
    st.best_hi = 0
    st.best_lo = 0
    for v in range(n):
        st.adj[v] = <unsigned int> adj[v]
        degs[v] = __builtin_popcount(st.adj[v])
    for v in range(n):
        idx[v] = v
    for i in range(1, n):
        j = i
        while j > 0 and degs[idx[j - 1]] > degs[idx[j]]:
            tmp = idx[j - 1]
            idx[j - 1] = idx[j]
            idx[j] = tmp
            j -= 1
    colors[idx[0]] = 0
    for i in range(1, n):
        colors[idx[i]] = colors[idx[i - 1]] + (1 if degs[idx[i]] != degs[idx[i - 1]] else 0)
    _canon_search_c(&st, colors)
    return (n, (int(st.best_hi) << 64) | int(st.best_lo))

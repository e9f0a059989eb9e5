"""Benchmark: compiled kernels vs the pure-Python reference.

Runs the three hot paths on identical inputs and prints a table:

* peel             -- full collection closure of random triangulations
* evaluate         -- candidate-deletion sweeps over a min-degree-5 core
* rot_canon        -- canonical codes for the triangulation enumerator
* graph_canon      -- canonical forms for the connected-planar enumerator

Usage: python bench/bench_kernels.py [--n 20000] [--seed 7] [--repeat 3]
"""

import argparse
import random
import time
from array import array

from planar4 import _pykernels
from planar4 import generators as gen

try:
    from planar4 import _speedups
except ImportError:
    _speedups = None


def timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_peel(impl, eg, repeat):
    g = eg.graph
    verts, index, indptr, indices = g.dense_index()
    n = len(verts)

    def run():
        degs = array("i", (indptr[i + 1] - indptr[i] for i in range(n)))
        alive = bytearray(b"\x01" * n)
        impl.peel(indptr, indices, degs, alive, 4, range(n))

    return timed(run, repeat)


def bench_evaluate(impl, eg, repeat):
    g = eg.graph
    verts, index, indptr, indices = g.dense_index()
    n = len(verts)
    degs = array("i", (indptr[i + 1] - indptr[i] for i in range(n)))
    alive = bytearray(b"\x01" * n)

    def run():
        for w in range(0, n, max(1, n // 2000)):
            impl.evaluate_deletion(indptr, indices, degs, alive, w, 4)

    return timed(run, repeat)


def bench_rot_canon(impl, rots, repeat):
    def run():
        for rot in rots:
            impl.rot_canon(rot)

    return timed(run, repeat)


def bench_graph_canon(impl, masks_list, repeat):
    def run():
        for n, masks in masks_list:
            impl.graph_canon(n, masks)

    return timed(run, repeat)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=20000)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    print(f"building inputs (n={args.n}, seed={args.seed}) ...")
    big = gen.random_triangulation(args.n, seed=args.seed)
    core = gen.random_triangulation(max(1000, args.n // 10), seed=args.seed, min_degree_target=5)
    rots = []
    for i, eg in enumerate(gen.all_triangulations(10)):
        rots.append([list(eg.rotation[v]) for v in range(10)])
    rng = random.Random(args.seed)
    masks_list = []
    for _ in range(3000):
        n = rng.randrange(5, 12)
        masks = [0] * n
        for _ in range(rng.randrange(n, 3 * n)):
            u, v = rng.randrange(n), rng.randrange(n)
            if u != v:
                masks[u] |= 1 << v
                masks[v] |= 1 << u
        masks_list.append((n, masks))

    rows = []
    impls = [("python", _pykernels)] + ([("compiled", _speedups)] if _speedups else [])
    for label, impl in impls:
        rows.append(
            (
                label,
                bench_peel(impl, big, args.repeat),
                bench_evaluate(impl, core, args.repeat),
                bench_rot_canon(impl, rots, args.repeat),
                bench_graph_canon(impl, masks_list, args.repeat),
            )
        )
    print(f"{'impl':<10}{'peel':>12}{'evaluate':>12}{'rot_canon':>12}{'graph_canon':>14}")
    for label, a, b, c, d in rows:
        print(f"{label:<10}{a:>11.4f}s{b:>11.4f}s{c:>11.4f}s{d:>13.4f}s")
    if len(rows) == 2:
        print(
            f"{'speedup':<10}"
            f"{rows[0][1] / rows[1][1]:>11.1f}x{rows[0][2] / rows[1][2]:>11.1f}x"
            f"{rows[0][3] / rows[1][3]:>11.1f}x{rows[0][4] / rows[1][4]:>13.1f}x"
        )


if __name__ == "__main__":
    main()

"""A/B benchmark for the distance-relaxation kernel.

Times dynclust._speedups (compiled) against dynclust._fallback (pure
Python) in one interpreter, on identical inputs, and checks both produce
identical distance/source arrays before printing timings.  Two workloads:

  full     repeated single-source sweeps over a fixed random graph
  update   an edge-insertion stream; each step relaxes the new edge's
           endpoints and re-runs the kernel from the improved one

Usage:
  python3 benchmarks/bench_kernels.py [--n 3000] [--m 15000]
                                      [--sweeps 20] [--updates 2000]
"""

import argparse
import sys
import time

import numpy as np

from dynclust import _fallback
from dynclust.graph import DynGraph

try:
    from dynclust import _speedups
except ImportError:
    _speedups = None

INT_MAX = np.iinfo(np.int64).max


def make_edges(n, m, rng):
    # spanning chain first so every sweep reaches all vertices
    edges = [(i, i + 1, float(rng.integers(1, 64))) for i in range(n - 1)]
    while len(edges) < m:
        u, v = rng.integers(0, n, size=2)
        if u != v:
            edges.append((int(u), int(v), float(rng.integers(1, 64))))
    return edges


def build(n, edges):
    g = DynGraph(n)
    for u, v, w in edges:
        g.insert_edge(u, v, w)
    return g


def run_full(impl, g, sources):
    first, eto, enxt, ew, cnt = g.arrays()
    t0 = time.perf_counter()
    for s in sources:
        dist = np.full(g.n, np.inf)
        src = np.full(g.n, INT_MAX, dtype=np.int64)
        dist[s] = 0.0
        src[s] = s
        impl.dijkstra_update(g.n, first, eto, enxt, ew, cnt,
                             dist, src, np.asarray([s], dtype=np.int64))
    return time.perf_counter() - t0, dist, src


def run_update(impl, n, base_edges, stream):
    g = build(n, base_edges)
    dist = np.full(n, np.inf)
    src = np.full(n, INT_MAX, dtype=np.int64)
    dist[0] = 0.0
    src[0] = 0
    first, eto, enxt, ew, cnt = g.arrays()
    impl.dijkstra_update(n, first, eto, enxt, ew, cnt,
                         dist, src, np.asarray([0], dtype=np.int64))
    t0 = time.perf_counter()
    for u, v, w in stream:
        g.insert_edge(u, v, w)
        seeds = []
        if dist[u] + w < dist[v]:
            dist[v] = dist[u] + w
            src[v] = src[u]
            seeds.append(v)
        elif dist[v] + w < dist[u]:
            dist[u] = dist[v] + w
            src[u] = src[v]
            seeds.append(u)
        if seeds:
            first, eto, enxt, ew, cnt = g.arrays()  # insert may reallocate
            impl.dijkstra_update(n, first, eto, enxt, ew, cnt, dist, src,
                                 np.asarray(seeds, dtype=np.int64))
    return time.perf_counter() - t0, dist, src


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=3000)
    ap.add_argument("--m", type=int, default=15000)
    ap.add_argument("--sweeps", type=int, default=20)
    ap.add_argument("--updates", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    edges = make_edges(args.n, args.m + args.updates, rng)
    base, stream = edges[:args.m], edges[args.m:]
    sources = rng.integers(0, args.n, size=args.sweeps)
    g = build(args.n, base)

    backends = [("python", _fallback)]
    if _speedups is not None:
        backends.insert(0, ("compiled", _speedups))
    else:
        print("compiled extension not importable; timing fallback only",
              file=sys.stderr)

    results = {}
    for name, impl in backends:
        tf, df, sf = run_full(impl, g, sources)
        tu, du, su = run_update(impl, args.n, base, stream)
        results[name] = (tf, tu, df, sf, du, su)

    if len(results) == 2:
        a, b = results["compiled"], results["python"]
        for i in (2, 3, 4, 5):
            assert np.array_equal(a[i], b[i]), "backend outputs diverge"

    print(f"graph: n={args.n} m={args.m}  "
          f"full={args.sweeps} sweeps  update={args.updates} insertions")
    print(f"{'backend':<10} {'full_s':>9} {'us/sweep':>10} "
          f"{'update_s':>9} {'us/insert':>10}")
    for name, (tf, tu, *_rest) in results.items():
        print(f"{name:<10} {tf:>9.4f} {tf / args.sweeps * 1e6:>10.0f} "
              f"{tu:>9.4f} {tu / args.updates * 1e6:>10.1f}")
    if len(results) == 2:
        print(f"speedup: full {results['python'][0] / results['compiled'][0]:.1f}x, "
              f"update {results['python'][1] / results['compiled'][1]:.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Seeded edge-stream generators for the harness and the acceptance runs.

The underlying algorithms are evaluated on insertion streams; nothing in
this package depends on which generator produced a stream.
"""

import numpy as np

from .graph import Stream


def gen_gnp(n: int, m: int, seed: int = 0, wmin: int = 1, wmax: int = 10) -> Stream:
    """m distinct uniform random edges with uniform integer weights."""
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(10,)))
    max_edges = n * (n - 1) // 2
    if m > max_edges:
        raise ValueError(f"m={m} exceeds the {max_edges} available pairs")
    seen = set()
    edges = []
    while len(edges) < m:
        u = int(rng.integers(0, n))
        v = int(rng.integers(0, n))
        if u == v:
            continue
        pair = (min(u, v), max(u, v))
        if pair in seen:
            continue
        seen.add(pair)
        edges.append((pair[0], pair[1], int(rng.integers(wmin, wmax + 1))))
    return Stream(n=n, edges=edges)


def gen_two_cluster(n: int, m: int, seed: int = 0, wmax: int = 32) -> Stream:
    """Two dense light-weight halves, heavy bridges early, and a light
    bridge late in the stream.  The light bridge merges the halves at small
    radius, forcing radius decreases and resampling cascades deep into the
    level structure."""
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(11,)))
    half = n // 2
    seen = set()
    edges = []

    def intra(side):
        for _ in range(200):
            if side == 0:
                u, v = int(rng.integers(0, half)), int(rng.integers(0, half))
            else:
                u, v = int(rng.integers(half, n)), int(rng.integers(half, n))
            pair = (min(u, v), max(u, v))
            if u != v and pair not in seen:
                seen.add(pair)
                return (pair[0], pair[1], int(rng.integers(1, 5)))
        return None

    bridge_positions = {m // 3: wmax, (2 * m) // 3: max(wmax // 2, 2), (4 * m) // 5: 1}
    i = 0
    while len(edges) < m:
        if i in bridge_positions and half >= 1:
            u = int(rng.integers(0, half))
            v = int(rng.integers(half, n))
            pair = (min(u, v), max(u, v))
            if pair not in seen:
                seen.add(pair)
                edges.append((pair[0], pair[1], bridge_positions[i]))
                i += 1
                continue
        e = intra(int(rng.integers(0, 2)))
        if e is None:
            e_u = int(rng.integers(0, half))
            e_v = int(rng.integers(half, n))
            pair = (min(e_u, e_v), max(e_u, e_v))
            if pair in seen:
                i += 1
                continue
            seen.add(pair)
            e = (pair[0], pair[1], int(rng.integers(1, wmax + 1)))
        edges.append(e)
        i += 1
    return Stream(n=n, edges=edges)


def gen_pref_attach(n: int, m: int, seed: int = 0, wmax: int = 10) -> Stream:
    """Degree-proportional attachment: new vertices wire to existing ones
    with probability proportional to degree+1, giving the heavy-tailed
    shape of collaboration graphs."""
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(12,)))
    deg = np.zeros(n, dtype=np.float64)
    edges = []
    active = 2
    deg[0] = deg[1] = 1
    edges.append((0, 1, int(rng.integers(1, wmax + 1))))
    while len(edges) < m:
        if active < n:
            u = active
            active += 1
        else:
            u = int(rng.integers(0, n))
        w = deg[:active] + 1.0
        if u < active:
            w = w.copy()
            w[u] = 0.0
        v = int(rng.choice(active, p=w / w.sum()))
        if u == v:
            continue
        deg[u] += 1
        deg[v] += 1
        edges.append((min(u, v), max(u, v), int(rng.integers(1, wmax + 1))))
    return Stream(n=n, edges=edges)


GENERATORS = {
    "gnp": gen_gnp,
    "two-cluster": gen_two_cluster,
    "pref-attach": gen_pref_attach,
}

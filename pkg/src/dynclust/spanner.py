"""Spanner over the weighted instance graph, maintained under weight
decreases and rebuilt on node arrivals.

Edges live in weight classes [base^c, base^{c+1}); inside a class the graph
is treated as unweighted, so a hop-path of length <= 2*lam-1 between the
endpoints of a skipped edge certifies pairwise stretch (2*lam-1)*(1+eps).
A decrease either stays in class (weight rewrite) or moves the edge to a
strictly lower class, where it arrives as a fresh unweighted edge.

Two per-class strategies:
  "cluster" (default): randomized clustering passes in the Baswana-Sen
      style, recomputed for a class whenever its edge set changes.  After
      every recompute a certification sweep adds any class edge whose
      endpoints drifted more than 2*lam-1 hops apart, so the stretch
      invariant holds unconditionally; the sweep's additions are counted
      in `repairs` (expected zero).
  "greedy": deterministic incremental greedy — keep an arriving edge iff
      its endpoints are not already within 2*lam-1 hops in the class
      certificate graph.  Kept edges stay kept (weights only decrease, so
      old certificates never go stale); per class the kept graph has girth
      > 2*lam, which bounds its size by |P|^(1+1/lam) + |P|.
"""

import math
from collections import deque

import numpy as np

from .powers import INF, pow_value

_BFS_NONE = -1


def _pair(x: int, y: int) -> tuple:
    return (x, y) if x < y else (y, x)


class _ClassState:
    __slots__ = ("edges", "span")

    def __init__(self):
        self.edges = set()  # pairs currently weighing into this class
        self.span = set()   # certificate edges (ever selected, for greedy)


class SpannerState:
    def __init__(self, nodes, pair_weights: dict, lam: int, eps: float,
                 mode: str = "cluster", seed: int = 0, restart_count: int = 0):
        if lam < 1:
            raise ValueError(f"lam must be >= 1, got {lam}")
        if mode not in ("cluster", "greedy"):
            raise ValueError(f"unknown spanner mode {mode!r}")
        self.nodes = sorted(int(v) for v in nodes)
        self.lam = lam
        self.eps = eps
        self.base = 1.0 + eps
        self.mode = mode
        self.seed = seed
        self.restart_count = restart_count
        self.pair_w = {}
        self.pair_class = {}
        self.classes = {}
        self.inserted_once = set()  # (pair, class) arrivals since restart
        self.repairs = 0
        self._epoch = 0
        for (x, y), w in sorted(pair_weights.items()):
            self._ingest(_pair(int(x), int(y)), float(w))
        self._recompute_dirty(set(self.classes))

    # -- class arithmetic ---------------------------------------------------

    def class_of(self, w: float) -> int:
        if w <= 0 or not math.isfinite(w):
            raise ValueError(f"spanner weights must be positive finite, got {w!r}")
        c = math.floor(math.log(w) / math.log(self.base))
        while pow_value(self.base, c + 1) <= w:
            c += 1
        while pow_value(self.base, c) > w:
            c -= 1
        return c

    # -- ingestion ------------------------------------------------------------

    def _ingest(self, pair, w):
        """Place a pair into its class (initial build / arrival in new class)."""
        c = self.class_of(w)
        key = (pair, c)
        if key in self.inserted_once:
            raise RuntimeError(f"edge {pair} re-entered class {c} between restarts")
        self.inserted_once.add(key)
        self.pair_w[pair] = w
        self.pair_class[pair] = c
        cs = self.classes.setdefault(c, _ClassState())
        cs.edges.add(pair)
        if self.mode == "greedy":
            if not self._hop_connected(cs.span, pair):
                cs.span.add(pair)
        return c

    # -- per-class machinery ----------------------------------------------------

    def _hop_connected(self, span: set, pair) -> bool:
        """True if pair's endpoints are within 2*lam-1 hops in `span`."""
        x, y = pair
        limit = 2 * self.lam - 1
        adj = {}
        for (a, b) in span:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        if x not in adj or y not in adj:
            return False
        seen = {x: 0}
        dq = deque([x])
        while dq:
            v = dq.popleft()
            d = seen[v]
            if d == limit:
                continue
            for u in adj.get(v, ()):
                if u not in seen:
                    if u == y:
                        return True
                    seen[u] = d + 1
                    dq.append(u)
        return x == y

    def _cluster_spanner(self, edges: set, rng) -> set:
        """Clustering-based unweighted spanner of the class subgraph."""
        if not edges:
            return set()
        if self.lam == 1:
            return set(edges)
        nodes = sorted({v for e in edges for v in e})
        adj = {v: set() for v in nodes}
        for (a, b) in edges:
            adj[a].add(b)
            adj[b].add(a)
        n = len(nodes)
        p = n ** (-1.0 / self.lam)
        span = set()
        cluster = {v: v for v in nodes}  # center of v's cluster
        alive = {v: dict() for v in nodes}  # neighbor -> representative edge
        for v in nodes:
            for u in adj[v]:
                alive[v][u] = _pair(v, u)

        for _ in range(self.lam - 1):
            centers = sorted(set(cluster.values()))
            sampled = {c for c in centers if rng.random() < p}
            new_cluster = {}
            for v in nodes:
                if v in cluster and cluster[v] in sampled:
                    new_cluster[v] = cluster[v]
            for v in nodes:
                if v not in cluster or v in new_cluster:
                    continue
                nb_sampled = sorted(u for u in alive[v]
                                    if u in cluster and cluster[u] in sampled)
                if nb_sampled:
                    u = nb_sampled[0]
                    span.add(_pair(v, u))
                    joined = cluster[u]
                    new_cluster[v] = joined
                    # drop v's edges into the cluster it just joined
                    for x in [x for x in alive[v]
                              if x in cluster and cluster[x] == joined]:
                        alive[x].pop(v, None)
                        alive[v].pop(x, None)
                else:
                    # one edge per adjacent cluster, then v retires
                    reps = {}
                    for u in sorted(alive[v]):
                        if u in cluster:
                            reps.setdefault(cluster[u], _pair(v, u))
                    span.update(reps.values())
                    for x in list(alive[v]):
                        alive[x].pop(v, None)
                    alive[v] = {}
            cluster = new_cluster

        # final phase: every surviving vertex buys one edge per adjacent cluster
        for v in nodes:
            reps = {}
            for u in sorted(alive[v]):
                if u in cluster:
                    reps.setdefault(cluster[u], _pair(v, u))
            span.update(reps.values())
        return span

    def _certify(self, cs: _ClassState):
        """Add any class edge whose endpoints exceed the hop budget; keeps
        the stretch invariant independent of clustering subtleties."""
        for pair in sorted(cs.edges):
            if pair in cs.span:
                continue
            if not self._hop_connected(cs.span, pair):
                cs.span.add(pair)
                self.repairs += 1

    def _recompute_dirty(self, dirty):
        if self.mode != "cluster":
            return
        for c in sorted(dirty):
            cs = self.classes.get(c)
            if cs is None:
                continue
            self._epoch += 1
            rng = np.random.default_rng(
                np.random.SeedSequence(self.seed,
                                       spawn_key=(self.restart_count, c + 2 ** 20,
                                                  self._epoch)))
            cs.span = self._cluster_spanner(cs.edges, rng)
            self._certify(cs)

    # -- public surface -----------------------------------------------------------

    def edges(self) -> list:
        """Current H-tilde as (u, v, weight) with live weights."""
        out = {}
        for cs in self.classes.values():
            for pair in cs.span:
                w = self.pair_w.get(pair)
                if w is not None:
                    out[pair] = w
        return [(u, v, w) for (u, v), w in sorted(out.items())]

    def edge_count(self) -> int:
        pairs = set()
        for cs in self.classes.values():
            pairs |= {p for p in cs.span if p in self.pair_w}
        return len(pairs)

    def apply_batch(self, batch) -> dict:
        """Apply weight decreases [(x, y, new_w)].  Returns the H-tilde diff
        {"added": [(u,v,w)], "updated": [(u,v,w)], "removed": [(u,v)]}."""
        before = {p: w for (u, v, w) in self.edges() for p in [(u, v)]}
        dirty = set()
        moves = []
        for x, y, w in batch:
            pair = _pair(int(x), int(y))
            w = float(w)
            old = self.pair_w.get(pair, INF)
            if w >= old:
                raise ValueError(
                    f"decrease for {pair} does not decrease: {w} >= {old}")
            c_new = self.class_of(w)
            if pair in self.pair_class:
                c_old = self.pair_class[pair]
                if c_new == c_old:
                    self.pair_w[pair] = w  # class-stable rewrite
                    continue
                self.classes[c_old].edges.discard(pair)
                dirty.add(c_old)
                self.pair_w.pop(pair)
                self.pair_class.pop(pair)
            moves.append((c_new, pair, w))
        for c_new, pair, w in sorted(moves):
            self._ingest(pair, w)
            dirty.add(c_new)
        self._recompute_dirty(dirty)
        after = {p: w for (u, v, w) in self.edges() for p in [(u, v)]}
        added = sorted((p[0], p[1], after[p]) for p in after.keys() - before.keys())
        removed = sorted(before.keys() - after.keys())
        updated = sorted((p[0], p[1], after[p])
                         for p in after.keys() & before.keys()
                         if after[p] != before[p])
        return {"added": added, "updated": updated, "removed": removed}

    def decrease(self, x: int, y: int, new_w: float) -> dict:
        return self.apply_batch([(x, y, new_w)])

    def add_nodes(self, new_nodes):
        # only meaningful through a restart; kept for the caller's symmetry
        self.nodes = sorted(set(self.nodes) | {int(v) for v in new_nodes})


def _extract_pairs(H) -> tuple:
    """Accepts a WeightedInstance-like object (node_ids, edges) or a
    (nodes, {pair: w}) tuple."""
    if hasattr(H, "node_ids"):
        pw = {}
        for u, v, w in H.edges:
            p = _pair(int(u), int(v))
            if p not in pw or w < pw[p]:
                pw[p] = float(w)
        return list(H.node_ids), pw
    nodes, pw = H
    return list(nodes), {_pair(*k): float(v) for k, v in pw.items()}


def spanner_init(H, lam: int, eps: float = 0.25, mode: str = "cluster",
                 seed: int = 0) -> SpannerState:
    nodes, pw = _extract_pairs(H)
    return SpannerState(nodes, pw, lam, eps, mode=mode, seed=seed)


def spanner_decrease(sp: SpannerState, x: int, y: int, new_w: float) -> dict:
    return sp.decrease(x, y, new_w)


def spanner_restart(sp: SpannerState, H) -> SpannerState:
    nodes, pw = _extract_pairs(H)
    return SpannerState(nodes, pw, sp.lam, sp.eps, mode=sp.mode, seed=sp.seed,
                        restart_count=sp.restart_count + 1)

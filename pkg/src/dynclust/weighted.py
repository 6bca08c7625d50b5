"""Vertex-weighted (k,z) instances and the static solver that runs on the
sparsified instance after every update.

The solver is deterministic: exact distance matrix (Dijkstra per node, on
the instance graph only), greedy seeding by largest weighted cost drop,
then steepest single-swap local search.  Instance sizes here are small by
construction (the reduction keeps |P| = O(k polylog)), so exactness beats
cleverness.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .graph import DynGraph
from .powers import INF


@dataclass
class WeightedInstance:
    node_ids: list
    wt: dict
    edges: list  # (u, v, w) undirected, node ids from node_ids
    k: int
    z: float

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        ids = set(self.node_ids)
        if len(ids) != len(self.node_ids):
            raise ValueError("duplicate node ids")
        for v, w in self.wt.items():
            if v not in ids:
                raise ValueError(f"weight for unknown node {v}")
            if w < 0 or float(w) != int(w):
                raise ValueError(f"vertex weights are nonnegative integers, got {w!r}")
        for u, v, w in self.edges:
            if u not in ids or v not in ids:
                raise ValueError(f"edge ({u},{v}) leaves the node set")
            if w <= 0:
                raise ValueError(f"edge weight must be positive, got {w!r}")

    def weight_of(self, v) -> float:
        return float(self.wt.get(v, 0))

    def total_weight(self) -> float:
        return float(sum(self.wt.get(v, 0) for v in self.node_ids))


@dataclass
class Solution:
    centers: set
    cost: float
    infeasible: bool = False

    def to_json(self) -> dict:
        return {
            "centers": sorted(self.centers),
            "cost": None if self.cost == INF else self.cost,
            "infeasible": self.infeasible,
        }


# -- internal dense form ----------------------------------------------------

class _Dense:
    """Re-indexed adjacency + exact distance matrix for an instance."""

    def __init__(self, inst: WeightedInstance):
        self.ids = sorted(inst.node_ids)
        self.index = {v: i for i, v in enumerate(self.ids)}
        n = len(self.ids)
        self.n = n
        self.wt = np.array([inst.weight_of(v) for v in self.ids], dtype=np.float64)
        first = np.full(n, -1, dtype=np.int64)
        m2 = 2 * len(inst.edges)
        eto = np.empty(max(m2, 1), dtype=np.int64)
        enxt = np.empty(max(m2, 1), dtype=np.int64)
        ew = np.empty(max(m2, 1), dtype=np.float64)
        a = 0
        for u, v, w in inst.edges:
            for (x, y) in ((self.index[u], self.index[v]),
                           (self.index[v], self.index[u])):
                eto[a] = y
                ew[a] = float(w)
                enxt[a] = first[x]
                first[x] = a
                a += 1
        self.arrays = (first, eto, enxt, ew, a)

    def dist_from(self, i: int) -> np.ndarray:
        first, eto, enxt, ew, cnt = self.arrays
        dist = np.full(self.n, INF, dtype=np.float64)
        src = np.full(self.n, np.iinfo(np.int64).max, dtype=np.int64)
        seeds = np.asarray([i], dtype=np.int64)
        dist[i] = 0.0
        src[i] = i
        kernels.dijkstra_update(self.n, first, eto, enxt, ew, cnt, dist, src, seeds)
        return dist

    def all_dist(self) -> np.ndarray:
        D = np.empty((self.n, self.n), dtype=np.float64)
        for i in range(self.n):
            D[i] = self.dist_from(i)
        return D

    def components(self) -> list:
        """Connected components as lists of positions, ordered by min id."""
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        first, eto, enxt, ew, cnt = self.arrays
        for x in range(self.n):
            a = first[x]
            while a != -1:
                rx, ry = find(x), find(eto[a])
                if rx != ry:
                    parent[max(rx, ry)] = min(rx, ry)
                a = enxt[a]
        groups = {}
        for x in range(self.n):
            groups.setdefault(find(x), []).append(x)
        return [groups[r] for r in sorted(groups)]


# -- operations ---------------------------------------------------------------

def value_wt(inst: WeightedInstance, x, r: float) -> float:
    """wt(Ball[x, r]) * r**z: the exact weighted ball value."""
    if r < 0:
        raise ValueError(f"radius must be >= 0, got {r}")
    dense = _Dense(inst)
    d = dense.dist_from(dense.index[x])
    ball_wt = float(dense.wt[d <= r].sum())
    return ball_wt * r ** inst.z


class InfeasibleInstance(ValueError):
    pass


def pad_weight(inst: WeightedInstance) -> float:
    M = max(len(inst.node_ids), math.ceil(inst.total_weight()), 1)
    Wmax = max([w for _, _, w in inst.edges], default=1.0)
    Wmax = max(Wmax, 1.0)
    return M * (M * Wmax) + 1.0


def connect_components(inst: WeightedInstance) -> WeightedInstance:
    """Chain disconnected components together with one huge-weight edge per
    gap so the solver sees a connected graph; optimal solutions (for any
    feasible k) are unchanged because the pad weight dominates every
    in-component cost.  Raises InfeasibleInstance when more than k
    components carry positive weight."""
    dense = _Dense(inst)
    comps = dense.components()
    if len(comps) <= 1:
        return inst
    weighted = sum(1 for comp in comps if any(dense.wt[i] > 0 for i in comp))
    if weighted > inst.k:
        raise InfeasibleInstance(
            f"{weighted} positive-weight components exceed k={inst.k}")
    pad = pad_weight(inst)
    extra = []
    for a, b in zip(comps, comps[1:]):
        extra.append((dense.ids[min(a)], dense.ids[min(b)], pad))
    return WeightedInstance(node_ids=list(inst.node_ids), wt=dict(inst.wt),
                            edges=list(inst.edges) + extra, k=inst.k, z=inst.z)


def _cost_vec(wt: np.ndarray, dmin: np.ndarray, z: float) -> float:
    return float(np.sum(wt * np.power(dmin, z)))


def solve_static(inst: WeightedInstance) -> Solution:
    """Deterministic O(1)-approximate solver for the weighted instance.
    Returns the infinite-cost marker when more positive-weight components
    than k exist."""
    try:
        padded = connect_components(inst)
    except InfeasibleInstance:
        return Solution(centers=set(), cost=INF, infeasible=True)
    dense = _Dense(padded)
    n, wt, z, k = dense.n, dense.wt, inst.z, min(inst.k, dense.n)
    if k >= n:
        return Solution(centers=set(dense.ids), cost=0.0)
    D = dense.all_dist()
    Dz = np.power(D, z)

    # greedy seeding: first the weighted 1-median, then max marginal gain
    costs0 = Dz @ wt
    chosen = [int(np.argmin(costs0))]
    cur = Dz[chosen[0]].copy()
    while len(chosen) < k:
        cand = np.minimum(Dz, cur[None, :])
        totals = cand @ wt
        totals[chosen] = INF
        nxt = int(np.argmin(totals))
        chosen.append(nxt)
        cur = cand[nxt]

    # steepest single-swap local search
    best_cost = float(cur @ wt)
    for _ in range(200):
        sel = np.asarray(sorted(chosen), dtype=np.int64)
        sub = Dz[sel]  # (k, n)
        order = np.argsort(sub, axis=0, kind="stable")
        best_row = order[0]
        d1 = sub[best_row, np.arange(n)]
        d2 = sub[order[1], np.arange(n)] if sel.size > 1 else np.full(n, INF)
        improved = False
        best_swap = None
        swap_cost = best_cost
        for ci, c in enumerate(sel):
            base = np.where(best_row == ci, d2, d1)
            cand = np.minimum(Dz, base[None, :])
            totals = cand @ wt
            totals[sel] = INF
            x = int(np.argmin(totals))
            if totals[x] < swap_cost * (1 - 1e-12):
                swap_cost = float(totals[x])
                best_swap = (int(c), x)
        if best_swap is not None:
            c, x = best_swap
            chosen = sorted(set(int(v) for v in sel) - {c} | {x})
            sel2 = np.asarray(chosen, dtype=np.int64)
            best_cost = float(np.min(Dz[sel2], axis=0) @ wt)
            improved = True
        if not improved:
            break

    sel = np.asarray(sorted(chosen), dtype=np.int64)
    dmin = np.min(Dz[sel], axis=0)
    cost = float(dmin @ wt)
    return Solution(centers={dense.ids[i] for i in chosen}, cost=cost)


# -- serialization --------------------------------------------------------------

def instance_to_json(inst: WeightedInstance) -> str:
    obj = {
        "nodes": [{"id": int(v), "wt": int(inst.wt.get(v, 0))}
                  for v in sorted(inst.node_ids)],
        "edges": [[int(u), int(v), float(w)] for u, v, w in
                  sorted((min(u, v), max(u, v), w) for u, v, w in inst.edges)],
        "k": inst.k,
        "z": inst.z,
    }
    return json.dumps(obj, sort_keys=True)


def instance_from_json(text: str) -> WeightedInstance:
    obj = json.loads(text)
    return WeightedInstance(
        node_ids=[d["id"] for d in obj["nodes"]],
        wt={d["id"]: d["wt"] for d in obj["nodes"]},
        edges=[(u, v, w) for u, v, w in obj["edges"]],
        k=obj["k"],
        z=obj["z"],
    )


def instance_to_graph(inst: WeightedInstance):
    """(DynGraph over re-indexed nodes, weight array, id list) for the
    brute-force oracle."""
    ids = sorted(inst.node_ids)
    index = {v: i for i, v in enumerate(ids)}
    g = DynGraph(len(ids))
    for u, v, w in inst.edges:
        g.insert_edge(index[u], index[v], float(w))
    wt = np.array([inst.weight_of(v) for v in ids], dtype=np.float64)
    return g, wt, ids

"""Static bicriteria level construction.

Peels the vertex set level by level: sample candidate centers, find the
smallest grid radius whose ball captures a beta fraction of the remaining
vertices, remove the ball, repeat until at most alpha*k*log n vertices
remain; those all become centers.  Radii are maxed with the previous level
so they are monotone along levels.

This static variant uses exact distances and removes the *entire* ball
(no fixed-size retention).  If some level's sampled candidates cannot
cover the required fraction at any finite radius (disconnected remainder),
construction stops and the run carries the "no finite solution" marker.
"""

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .graph import DynGraph
from .params import ClusteringParams, ceil_frac
from .powers import INF, round_up_pow
from .sssp import DistanceOracle


def covering_radius_from_values(vals: np.ndarray, count: int, beta: float,
                                eps: float) -> float:
    """Smallest (1+eps)**j (j >= 0) whose closed ball captures
    ceil(beta*count) of the given distance values; inf if none does."""
    q = ceil_frac(beta, count)
    if q <= 0:
        return 1.0
    if q > vals.size:
        return INF
    kth = float(np.partition(vals, q - 1)[q - 1])
    if kth == INF:
        return INF
    if kth <= 0:
        return 1.0
    return round_up_pow(kth, eps)


def smallest_covering_radius(g_or_oracle, S_i, U_i, beta: float, eps: float) -> float:
    """Public form of the radius search: distances come from exact search
    when given a graph, from the estimate oracle otherwise."""
    u_arr = np.asarray(sorted(U_i), dtype=np.int64)
    if u_arr.size == 0:
        return 1.0
    S = sorted(S_i)
    if not S:
        return INF
    if isinstance(g_or_oracle, DynGraph):
        dist, _ = g_or_oracle.distances(S)
        vals = dist[u_arr]
    else:
        vals = g_or_oracle.delta[u_arr]
    return covering_radius_from_values(vals, u_arr.size, beta, eps)


@dataclass
class StaticLevel:
    U: np.ndarray
    S: np.ndarray
    nu_tilde: float
    nu: float
    B: np.ndarray


@dataclass
class StaticRun:
    params: ClusteringParams
    levels: list = field(default_factory=list)
    t: int = 0
    sigma: np.ndarray | None = None
    opt_infinite: bool = False

    @property
    def S(self) -> np.ndarray:
        parts = [lv.S for lv in self.levels]
        return np.unique(np.concatenate(parts)) if parts else np.empty(0, dtype=np.int64)

    @property
    def radii(self) -> list:
        return [lv.nu for lv in self.levels]

    def trace(self) -> list:
        return [
            {
                "level": i,
                "U_size": int(lv.U.size),
                "S_size": int(lv.S.size),
                "nu_tilde": None if lv.nu_tilde == INF else lv.nu_tilde,
                "nu": None if lv.nu == INF else lv.nu,
                "B_size": int(lv.B.size),
            }
            for i, lv in enumerate(self.levels)
        ]


def run_static(g: DynGraph, p: ClusteringParams) -> StaticRun:
    rng = np.random.default_rng(p.seed)
    run = StaticRun(params=p)
    sigma = np.full(g.n, -1, dtype=np.int64)
    thresh = p.sample_threshold(g.n)
    incident = set(g.incident_vertices().tolist())

    U = np.arange(g.n, dtype=np.int64)
    nu_prev = 0.0
    while U.size > thresh:
        pool = np.asarray(sorted(set(U.tolist()) & incident), dtype=np.int64)
        prob = p.sample_prob(U.size, g.n)
        S = pool[rng.random(pool.size) < prob] if pool.size else pool
        if S.size == 0:
            # nothing to sample: remainder cannot be covered at any radius
            run.levels.append(StaticLevel(U=U, S=U.copy(), nu_tilde=INF, nu=INF,
                                          B=U.copy()))
            sigma[U] = U
            run.opt_infinite = True
            run.t = len(run.levels) - 1
            run.sigma = sigma
            return run
        dist, src = g.distances(S)
        nu_tilde = covering_radius_from_values(dist[U], U.size, p.beta, p.eps)
        if nu_tilde == INF:
            run.levels.append(StaticLevel(U=U, S=U.copy(), nu_tilde=INF, nu=INF,
                                          B=U.copy()))
            sigma[U] = U
            run.opt_infinite = True
            run.t = len(run.levels) - 1
            run.sigma = sigma
            return run
        nu = max(nu_tilde, nu_prev)
        inside = dist[U] <= nu
        B = U[inside]
        sigma[B] = src[B]
        run.levels.append(StaticLevel(U=U, S=S, nu_tilde=nu_tilde, nu=nu, B=B))
        U = U[~inside]
        nu_prev = nu

    run.levels.append(StaticLevel(U=U, S=U.copy(),
                                  nu_tilde=0.0, nu=nu_prev, B=U.copy()))
    sigma[U] = U
    run.t = len(run.levels) - 1
    run.sigma = sigma
    return run


def static_cost(g: DynGraph, run: StaticRun) -> float:
    """Exact sum of dist(v, sigma(v))**z over all vertices."""
    sigma = run.sigma
    total = 0.0
    for s in np.unique(sigma):
        members = np.flatnonzero(sigma == s)
        if members.size == 1 and members[0] == s:
            continue
        dist, _ = g.distances([int(s)])
        d = dist[members]
        if np.any(d == INF):
            return INF
        total += float(np.sum(d ** run.params.z))
    return total


def nu_star(g: DynGraph, S_i, U_i, beta: float) -> float:
    """Smallest real radius whose exact closed ball around S_i captures
    ceil(beta |U_i|) members of U_i; 0 when the sources alone suffice."""
    u_arr = np.asarray(sorted(U_i), dtype=np.int64)
    q = ceil_frac(beta, u_arr.size)
    if q <= 0:
        return 0.0
    S = sorted(S_i)
    if not S:
        return INF
    dist, _ = g.distances(S)
    vals = dist[u_arr]
    if q > vals.size:
        return INF
    return float(np.partition(vals, q - 1)[q - 1])


def mu_star_bruteforce(g: DynGraph, U_i, k: int, gamma: float,
                       budget: int = 500_000) -> float:
    """Exact minimum, over all center sets X of size <= k, of the smallest
    radius at which Ball[X, r] captures ceil(gamma |U_i|) of U_i.  Exhaustive;
    refuses instances whose enumeration exceeds `budget` subsets."""
    u_arr = np.asarray(sorted(U_i), dtype=np.int64)
    q = ceil_frac(gamma, u_arr.size)
    if q <= 0:
        return 0.0
    kk = min(k, g.n)
    n_combos = math.comb(g.n, kk)
    if n_combos > budget:
        raise ValueError(
            f"mu_star_bruteforce: C({g.n},{kk})={n_combos} exceeds budget {budget}")
    D = np.empty((g.n, g.n), dtype=np.float64)
    for v in range(g.n):
        D[v], _ = g.distances([v])
    DU = D[:, u_arr]
    best = INF
    chunk = []
    for combo in itertools.combinations(range(g.n), kk):
        chunk.append(combo)
        if len(chunk) == 20_000:
            best = min(best, _mu_chunk(DU, chunk, q))
            chunk = []
    if chunk:
        best = min(best, _mu_chunk(DU, chunk, q))
    return best


def _mu_chunk(DU: np.ndarray, combos: list, q: int) -> float:
    idx = np.asarray(combos, dtype=np.int64)
    dmin = DU[idx].min(axis=1)  # (n_combos, |U|)
    kth = np.partition(dmin, q - 1, axis=1)[:, q - 1]
    return float(kth.min())

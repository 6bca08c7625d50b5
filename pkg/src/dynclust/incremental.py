"""Incremental bicriteria clustering under adversarial edge insertions.

State is a stack of levels.  Level i holds the survivor set U_i, an
append-only candidate set cand_i with a distance-estimate oracle over it,
a grid radius nu_i, the retained ball block B_i and the top-up block Z_i.
Complete levels always retain exactly ceil(beta |U_i|) vertices between
updates, so the |U_i| sequence is a fixed function of n and never drifts.

An insertion can only shrink distances, so radii only ever decrease.  The
update finds the shallowest level whose valid radius dropped, rebuilds it,
and lets the displaced vertices cascade down through resampling phases;
vertices evicted from a ball ride the shared spill pool Z until a deeper
level absorbs them or they reach the last level.

Graphs too sparse to cover a beta fraction at any radius park the
remainder in a "frontier" level (infinite radius, every vertex its own
center, a sampled probe watching for coverage); the overall solution is
flagged as having no finite cost until the frontier clears.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .graph import DynGraph
from .params import ClusteringParams, ceil_frac
from .powers import INF
from .sssp import DistanceOracle, oracle_init, oracle_extend_sources, oracle_insert
from .static_levels import covering_radius_from_values

logger = logging.getLogger("dynclust")


class Level:
    __slots__ = ("U", "cand", "oracle", "nu", "nu_tilde", "B", "Z", "_u_arr")

    def __init__(self, U):
        self.U = set(U)
        self.cand = set()
        self.oracle = None
        self.nu = INF          # undefined radius; compares as +inf
        self.nu_tilde = INF
        self.B = set()
        self.Z = set()
        self._u_arr = None

    def set_U(self, U):
        self.U = set(U)
        self._u_arr = None

    def u_arr(self) -> np.ndarray:
        if self._u_arr is None or self._u_arr.size != len(self.U):
            self._u_arr = np.fromiter(sorted(self.U), dtype=np.int64, count=len(self.U))
        return self._u_arr


@dataclass
class UpdateReport:
    step: int
    first_decrease_level: int | None
    resampled: bool
    radii: list
    S_size: int
    t: int
    opt_infinite: bool
    decreased_levels: list = field(default_factory=list)
    sigma_changes: int = 0

    def to_json(self) -> dict:
        return {
            "step": self.step,
            "first_decrease_level": self.first_decrease_level,
            "resampled": self.resampled,
            "radii": [None if r == INF else r for r in self.radii],
            "S_size": self.S_size,
            "t": self.t,
            "opt_infinite": self.opt_infinite,
            "decreased_levels": list(self.decreased_levels),
            "sigma_changes": self.sigma_changes,
        }


class BicriteriaState:
    def __init__(self, g: DynGraph, p: ClusteringParams):
        self.g = g
        self.p = p
        self.rng = np.random.default_rng(p.seed)
        self.levels: list[Level] = []
        self.t = 0
        self.Z: set = set()
        self.sigma = np.full(g.n, -1, dtype=np.int64)
        self.S_ever: set = set()
        self.image_ever: set = set()
        self.updates = 0
        self.resample_phases = 0
        self.radius_decreases = 0
        self.sigma_inc = 0
        self._had_edge = np.zeros(g.n, dtype=bool)
        self._sigma_changed: dict = {}
        self._decreased: list = []
        self._last_batch: tuple = ([], [])

    @property
    def opt_infinite(self) -> bool:
        return self.levels[self.t].nu == INF

    @property
    def thresh(self) -> float:
        return self.p.sample_threshold(self.g.n)

    def level_sizes(self) -> list:
        return [len(lv.U) for lv in self.levels]

    # -- sigma bookkeeping --------------------------------------------------

    def _assign(self, v: int, s: int):
        old = int(self.sigma[v])
        if old == s:
            return
        if v not in self._sigma_changed:
            self._sigma_changed[v] = old
        self.sigma[v] = s

    # -- radius machinery ---------------------------------------------------

    def _prev_nu(self, i: int) -> float:
        return self.levels[i - 1].nu if i > 0 else 0.0

    def _covering(self, lv: Level) -> float:
        if lv.oracle is None or not lv.U:
            return INF
        vals = lv.oracle.delta[lv.u_arr()]
        return covering_radius_from_values(vals, len(lv.U), self.p.beta, self.p.eps)

    def valid_radius(self, i: int) -> float:
        """max(current covering radius of level i's candidates, nu_{i-1})."""
        lv = self.levels[i]
        cov = self._covering(lv)
        return max(cov, self._prev_nu(i))

    def _rad_decr(self, i: int, nu_hat: float):
        """Adopt the smaller radius at level i: re-retain the ball block,
        reassign its members, spill everything displaced into Z."""
        lv = self.levels[i]
        lv.nu = nu_hat
        target = ceil_frac(self.p.beta, len(lv.U))
        u_arr = lv.u_arr()
        members = u_arr[lv.oracle.delta[u_arr] <= nu_hat]
        if members.size < target:
            raise RuntimeError(
                f"level {i}: ball at radius {nu_hat} holds {members.size} < "
                f"required {target}")
        new_B = set(int(v) for v in members[:target])
        att = lv.oracle._src
        for v in sorted(new_B):
            self._assign(v, int(att[v]))
        spilled = (lv.B & lv.U) - new_B
        self.Z |= lv.Z | spilled
        lv.B = new_B
        lv.Z = set()
        self.radius_decreases += 1

    # -- level construction ---------------------------------------------------

    def _finish_last(self, i: int, U: set):
        del self.levels[i:]
        lv = Level(U)
        lv.cand = set(U)
        lv.nu = self._prev_nu(i)
        lv.nu_tilde = 0.0
        lv.B = set(U)
        self.levels.append(lv)
        self.t = i
        for v in sorted(U):
            self._assign(v, v)
        self.Z.clear()

    def _finish_frontier(self, i: int):
        lv = self.levels[i]
        lv.nu = INF
        lv.nu_tilde = INF
        lv.B = set()
        lv.Z = set()
        del self.levels[i + 1:]
        self.t = i
        for v in sorted(lv.U):
            self._assign(v, v)
        self.Z.clear()

    def _rebuild(self, i: int, nextU: set, count_phases: bool) -> bool:
        """Run the cascade from level i downward.  Returns True if at least
        one resampling phase ran."""
        g, p = self.g, self.p
        incident = set(int(x) for x in g.incident_vertices())
        resampled = False
        while True:
            self.Z &= nextU
            if len(nextU) <= self.thresh:
                self._finish_last(i, nextU)
                return resampled
            if i < len(self.levels):
                lv = self.levels[i]
                lv.set_U(nextU)
            else:
                lv = Level(nextU)
                self.levels.append(lv)
            resampled = True
            if count_phases:
                self.resample_phases += 1
            pool = sorted((incident & lv.U) - lv.cand)
            prob = p.sample_prob(len(lv.U), g.n)
            if pool and prob > 0:
                draws = self.rng.random(len(pool))
                lv.cand |= {v for v, r in zip(pool, draws) if r < prob}
            if not lv.cand:
                self._finish_frontier(i)
                return resampled
            lv.oracle = oracle_init(g, lv.cand, p.eps)
            nu_tilde = self._covering(lv)
            lv.nu_tilde = nu_tilde
            nu_hat = max(nu_tilde, self._prev_nu(i))
            if nu_hat < lv.nu:
                self._rad_decr(i, nu_hat)
                self._decreased.append(i)
            elif lv.nu == INF:
                # probe still cannot cover a beta fraction: stay stuck
                self._finish_frontier(i)
                return resampled
            else:
                # radius keeps; trim the blocks to the new U and top up from Z
                lv.B &= lv.U
                lv.Z &= lv.U
                target = ceil_frac(p.beta, len(lv.U)) - len(lv.B) - len(lv.Z)
                if target < 0:
                    raise RuntimeError(
                        f"level {i}: retained blocks exceed quota ({-target} over)")
                avail = self.Z & lv.U
                if len(avail) < target:
                    raise RuntimeError(
                        f"level {i}: spill pool holds {len(avail)} < top-up {target}")
                zp = set(sorted(avail)[:target])
                lv.Z |= zp
                self.Z -= zp
            nextU = lv.U - (lv.B | lv.Z)
            i += 1

    # -- update entry ---------------------------------------------------------

    def handle_insertion(self, u: int, v: int, w: float) -> UpdateReport:
        g, p = self.g, self.p
        g.insert_edge(u, v, w)
        self.updates += 1
        self._sigma_changed = {}
        self._decreased = []
        old_t = self.t
        old_sizes = self.level_sizes()

        for lv in self.levels:
            if lv.oracle is not None:
                oracle_insert(lv.oracle, u, v, w)

        # one sampling chance per vertex when it gains its first edge,
        # so a stuck frontier can grow its probe without mass resampling
        fresh = [x for x in (u, v) if not self._had_edge[x]]
        self._had_edge[u] = True
        self._had_edge[v] = True
        front = self.levels[self.t]
        if front.nu == INF and fresh:
            prob = p.sample_prob(len(front.U), g.n)
            for x in sorted(fresh):
                if x in front.U and self.rng.random() < prob:
                    front.cand.add(x)
                    if front.oracle is None:
                        front.oracle = oracle_init(g, front.cand, p.eps)
                    else:
                        oracle_extend_sources(front.oracle, [x])

        # shallowest level whose valid radius dropped; the frontier level
        # joins the scan because its stored radius is the +inf sentinel
        ell = None
        ell_nu_hat = None
        for i in range(self.t + 1):
            lv = self.levels[i]
            if i == self.t and lv.nu != INF:
                break  # true last level carries no radius of its own
            if lv.oracle is None:
                continue
            nu_hat = self.valid_radius(i)
            if nu_hat < lv.nu:
                ell, ell_nu_hat = i, nu_hat
                break

        resampled = False
        if ell is not None:
            self.Z = set()
            self._rad_decr(ell, ell_nu_hat)
            self._decreased.append(ell)
            resampled = self._rebuild(ell + 1, self.levels[ell].U - self.levels[ell].B,
                                      count_phases=True)

        # consistency guards: levels never vanish, complete sizes are pinned
        if self.t < old_t:
            raise RuntimeError(f"level count shrank: {old_t} -> {self.t}")
        new_sizes = self.level_sizes()
        for i in range(min(old_t, self.t)):
            if new_sizes[i] != old_sizes[i]:
                raise RuntimeError(
                    f"survivor count drifted at level {i}: {old_sizes[i]} -> {new_sizes[i]}")

        S_current = set()
        for i in range(self.t):
            S_current |= self.levels[i].cand
        S_current |= self.levels[self.t].U
        self.S_ever |= S_current

        triples = []
        new_centers = set()
        for vtx, old in sorted(self._sigma_changed.items()):
            now = int(self.sigma[vtx])
            if now == old:
                continue
            triples.append((vtx, None if old == -1 else old, now))
            if now not in self.image_ever:
                new_centers.add(now)
        if new_centers:
            self.sigma_inc += 1
            self.image_ever |= new_centers
        self._last_batch = (triples, sorted(new_centers))

        return UpdateReport(
            step=self.updates,
            first_decrease_level=ell,
            resampled=resampled,
            radii=[lv.nu for lv in self.levels],
            S_size=len(self.S_ever),
            t=self.t,
            opt_infinite=self.opt_infinite,
            decreased_levels=list(self._decreased),
            sigma_changes=len(triples),
        )


def init_bicriteria(g: DynGraph, p: ClusteringParams) -> BicriteriaState:
    state = BicriteriaState(g, p)
    state._sigma_changed = {}
    state._decreased = []
    state._had_edge[:] = g._first != -1
    state._rebuild(0, set(range(g.n)), count_phases=False)
    S_current = set()
    for i in range(state.t):
        S_current |= state.levels[i].cand
    S_current |= state.levels[state.t].U
    state.S_ever |= S_current
    state.image_ever = set(int(s) for s in np.unique(state.sigma) if s >= 0)
    state._sigma_changed = {}
    state._decreased = []
    state.radius_decreases = 0
    return state


def valid_radius(state: BicriteriaState, i: int) -> float:
    return state.valid_radius(i)


def handle_insertion(state: BicriteriaState, u: int, v: int, w: float) -> UpdateReport:
    return state.handle_insertion(u, v, w)


def current_solution(state: BicriteriaState):
    """(S, sigma): the monotone center set and the assignment array."""
    S = np.fromiter(sorted(state.S_ever), dtype=np.int64, count=len(state.S_ever))
    return S, state.sigma.copy()


def sigma_change_feed(state: BicriteriaState):
    """Last update's assignment changes: ([(v, old_or_None, new)], new_centers)."""
    return state._last_batch


def check_invariants(state: BicriteriaState, prev_radii: list | None = None):
    """Structural laws, checked exactly.  Raises AssertionError on breach."""
    p, g = state.p, state.g
    levels = state.levels
    t = state.t
    assert len(levels) == t + 1, f"level list length {len(levels)} != t+1 {t + 1}"
    assert not state.Z, f"spill pool must drain between updates, holds {len(state.Z)}"

    n_bound = p.level_bound(g.n)
    assert t <= n_bound, f"t={t} exceeds level bound {n_bound:.3f}"

    seen = set()
    for i, lv in enumerate(levels):
        assert lv.B <= lv.U, f"level {i}: B not inside U"
        assert lv.Z <= lv.U, f"level {i}: Z not inside U"
        assert not (lv.B & lv.Z), f"level {i}: B and Z overlap"
        if i == 0:
            assert lv.U == set(range(g.n)), "level 0 must hold every vertex"
        if i < t:
            quota = ceil_frac(p.beta, len(lv.U))
            assert len(lv.B) + len(lv.Z) == quota, \
                f"level {i}: |B|+|Z|={len(lv.B) + len(lv.Z)} != {quota}"
            assert levels[i + 1].U == lv.U - (lv.B | lv.Z), \
                f"level {i}: next U is not U minus the removed blocks"
            assert len(lv.U) > state.thresh, f"level {i} below the peel threshold"
            assert lv.nu != INF, f"complete level {i} carries no radius"
            assert lv.nu >= state._prev_nu(i), \
                f"level {i}: radius {lv.nu} below previous {state._prev_nu(i)}"
            assert lv.oracle is not None and lv.cand == lv.oracle.sources, \
                f"level {i}: oracle sources drifted from candidates"
        seen |= lv.B | lv.Z
    last = levels[t]
    if last.nu == INF:
        assert len(last.U) > state.thresh, "frontier level below threshold"
    else:
        assert last.nu == state._prev_nu(t), "last level radius must copy level t-1"
        assert last.B == last.U, "last level must retain everything"
    seen |= last.U
    assert seen == set(range(g.n)), "levels do not partition the vertex set"

    for v in sorted(last.U):
        assert state.sigma[v] == v, f"last-level vertex {v} not self-assigned"
    img = set(int(s) for s in np.unique(state.sigma))
    assert img <= state.S_ever, "assignment targets outside the center set"

    if prev_radii is not None:
        for i in range(min(len(prev_radii), t + 1)):
            assert levels[i].nu <= prev_radii[i], \
                f"level {i}: radius rose {prev_radii[i]} -> {levels[i].nu}"

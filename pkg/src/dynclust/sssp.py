"""Incremental multi-source distance estimates with a (1+eps) guarantee.

The oracle keeps *exact* distances on a rounded copy of the graph: every
edge weight is rounded up to a power of base = 1+eps', and the reported
estimate is the exact rounded-graph distance rounded up to the same grid,
where (1+eps')^2 <= 1+eps.  Two consequences the rest of the package leans
on:

  dist_G(S,v) <= delta(v) <= (1+eps) * dist_G(S,v)      (sandwich)
  delta(v) is non-increasing over edge insertions and source additions,
  and takes O(log_{1+eps}(nW)) distinct values, so per-vertex reported
  changes stay logarithmic.

insert()/extend_sources() return exactly the vertices whose *reported*
estimate decreased.
"""

import logging
import math

import numpy as np

from . import kernels
from .powers import pow_value, round_up_pow, round_up_pow_array

logger = logging.getLogger("dynclust")

_SAFETY = 1.0 - 1e-12  # keeps (1+eps')^2 strictly below 1+eps in floats


class DistanceOracle:
    __slots__ = ("g", "eps", "base", "sources", "_d", "_src", "delta",
                 "change_count")

    def __init__(self, g, sources, eps: float):
        if eps <= 0:
            raise ValueError(f"eps must be positive, got {eps!r}")
        sources = sorted(int(s) for s in sources)
        if not sources:
            raise ValueError("oracle needs at least one source")
        if sources[0] < 0 or sources[-1] >= g.n:
            raise ValueError("source out of range")
        self.g = g
        self.eps = eps
        self.base = 1.0 + (math.sqrt(1.0 + eps) - 1.0) * _SAFETY
        self.sources = set(sources)
        self._d = np.full(g.n, math.inf, dtype=np.float64)
        self._src = np.full(g.n, np.iinfo(np.int64).max, dtype=np.int64)
        self.delta = np.full(g.n, math.inf, dtype=np.float64)
        self.change_count = 0
        seeds = np.asarray(sources, dtype=np.int64)
        self._d[seeds] = 0.0
        self._src[seeds] = seeds
        first, eto, enxt, ew, cnt = g.arrays()
        kernels.dijkstra_update(g.n, first, eto, enxt,
                                g.rounded_weights(self.base), cnt,
                                self._d, self._src, seeds)
        reach = self._d < math.inf
        self.delta[reach] = self._report(self._d[reach])
        self.delta[seeds] = 0.0

    # -- helpers ----------------------------------------------------------

    def _report(self, d):
        """Round rounded-graph distances up onto the reporting grid."""
        d = np.asarray(d, dtype=np.float64)
        out = np.zeros_like(d)
        pos = d > 0
        if np.any(pos):
            out[pos] = round_up_pow_array(d[pos], self.base)
        return out

    def _settle(self, improved, touched):
        """Recompute reported values for vertices whose internal distance
        changed; return the sorted ids whose reported value decreased."""
        ids = np.unique(np.concatenate([improved, touched])) if touched.size or improved.size \
            else np.empty(0, dtype=np.int64)
        if ids.size == 0:
            return ids
        new_rep = self._report(self._d[ids])
        changed = ids[new_rep < self.delta[ids]]
        self.delta[ids] = np.minimum(self.delta[ids], new_rep)
        self.change_count += int(changed.size)
        return changed

    # -- updates ----------------------------------------------------------

    def insert(self, u: int, v: int, w: float) -> np.ndarray:
        """Edge {u,v} of weight w was inserted into g; propagate.  Returns
        the sorted vertices whose reported estimate decreased."""
        wr = round_up_pow(w, self.base - 1.0)
        seeds = []
        du, dv = self._d[u], self._d[v]
        if du + wr < dv:
            self._d[v] = du + wr
            self._src[v] = self._src[u]
            seeds.append(v)
        elif dv + wr < du:
            self._d[u] = dv + wr
            self._src[u] = self._src[v]
            seeds.append(u)
        if not seeds:
            return np.empty(0, dtype=np.int64)
        seeds = np.asarray(seeds, dtype=np.int64)
        first, eto, enxt, ew, cnt = self.g.arrays()
        touched = kernels.dijkstra_update(self.g.n, first, eto, enxt,
                                          self.g.rounded_weights(self.base), cnt,
                                          self._d, self._src, seeds)
        return self._settle(seeds, touched)

    def extend_sources(self, new_sources) -> np.ndarray:
        """Add sources (distance-0 seeds).  Re-adding an existing source is
        a logged no-op.  Returns the vertices whose estimate decreased."""
        fresh = []
        for s in sorted(int(s) for s in new_sources):
            if not (0 <= s < self.g.n):
                raise ValueError(f"source {s} out of range")
            if s in self.sources:
                logger.debug("extend_sources: %d already a source, ignored", s)
                continue
            self.sources.add(s)
            fresh.append(s)
        if not fresh:
            return np.empty(0, dtype=np.int64)
        seeds = np.asarray(fresh, dtype=np.int64)
        self._d[seeds] = 0.0
        self._src[seeds] = seeds
        first, eto, enxt, ew, cnt = self.g.arrays()
        touched = kernels.dijkstra_update(self.g.n, first, eto, enxt,
                                          self.g.rounded_weights(self.base), cnt,
                                          self._d, self._src, seeds)
        return self._settle(seeds, touched)

    # -- queries ----------------------------------------------------------

    def value(self, v: int) -> float:
        return float(self.delta[v])

    def attribution(self, v: int) -> int:
        """The source this vertex's estimate is charged to (itself for a
        source; meaningless when unreachable)."""
        s = int(self._src[v])
        return s if self._d[v] < math.inf else -1

    def grid_radius(self, j: int) -> float:
        return pow_value(self.base, j)


def oracle_init(g, sources, eps: float) -> DistanceOracle:
    return DistanceOracle(g, sources, eps)


def oracle_insert(o: DistanceOracle, u: int, v: int, w: float) -> np.ndarray:
    return o.insert(u, v, w)


def oracle_extend_sources(o: DistanceOracle, new_sources) -> np.ndarray:
    return o.extend_sources(new_sources)

"""Pure-Python relaxation kernel.

Mirrors _speedups.pyx exactly; selected by kernels.py when the compiled
extension is unavailable or DYNCLUST_PURE=1 is set.  Semantics:

dijkstra_update(n, first, eto, enxt, ew, arc_count, dist, src, seeds)
    Runs best-first relaxation from `seeds`, whose dist/src entries the
    caller has already set.  Entries improve under the lexicographic order
    (dist, src), so exact distance ties resolve to the smallest source id.
    Returns the vertices (int64 array, unsorted, deduplicated) whose dist
    strictly decreased *inside* the call; the seeds' own improvements are
    the caller's bookkeeping.
"""

import heapq

import numpy as np

BACKEND = "python"


def dijkstra_update(n, first, eto, enxt, ew, arc_count, dist, src, seeds):
    heap = []
    for v in seeds:
        v = int(v)
        heapq.heappush(heap, (dist[v], src[v], v))
    touched = []
    touched_flag = np.zeros(n, dtype=bool)
    while heap:
        d, s, v = heapq.heappop(heap)
        if d > dist[v] or (d == dist[v] and s > src[v]):
            continue  # stale entry
        a = first[v]
        while a != -1:
            u = eto[a]
            nd = d + ew[a]
            if nd < dist[u] or (nd == dist[u] and s < src[u]):
                if nd < dist[u] and not touched_flag[u]:
                    touched_flag[u] = True
                    touched.append(u)
                dist[u] = nd
                src[u] = s
                heapq.heappush(heap, (nd, s, u))
            a = enxt[a]
    return np.asarray(touched, dtype=np.int64)

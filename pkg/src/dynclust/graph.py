"""Insert-only weighted graph over a fixed vertex set {0..n-1}.

Storage is a forward-star over numpy arrays so the relaxation kernels can
run on raw buffers.  Parallel edges are stored as-is; shortest paths see
the cheapest copy automatically.  Weights are validated into [1, max(n,2)^4]
(the concrete reading of "polynomially bounded"); anything outside is
rejected, never rescaled.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .powers import round_up_pow_array

WEIGHT_EXPONENT = 4  # weights allowed up to max(n,2)**4


class StreamParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class DynGraph:
    __slots__ = (
        "n", "m", "W", "max_weight",
        "_first", "_eto", "_enxt", "_ew", "_arc_count",
        "_rounded",
    )

    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"graph needs at least one vertex, got n={n}")
        self.n = n
        self.m = 0
        self.W = 1.0  # largest weight inserted so far (1 if none)
        self.max_weight = float(max(n, 2)) ** WEIGHT_EXPONENT
        self._first = np.full(n, -1, dtype=np.int64)
        cap = 64
        self._eto = np.empty(cap, dtype=np.int64)
        self._enxt = np.empty(cap, dtype=np.int64)
        self._ew = np.empty(cap, dtype=np.float64)
        self._arc_count = 0
        self._rounded = {}  # base -> [array, filled_arc_count]

    # -- mutation ---------------------------------------------------------

    def _grow(self):
        cap = self._eto.shape[0] * 2
        self._eto = np.resize(self._eto, cap)
        self._enxt = np.resize(self._enxt, cap)
        self._ew = np.resize(self._ew, cap)
        for entry in self._rounded.values():
            entry[0] = np.resize(entry[0], cap)

    def _push_arc(self, u: int, v: int, w: float):
        if self._arc_count == self._eto.shape[0]:
            self._grow()
        a = self._arc_count
        self._eto[a] = v
        self._ew[a] = w
        self._enxt[a] = self._first[u]
        self._first[u] = a
        self._arc_count += 1

    def insert_edge(self, u: int, v: int, w: float) -> int:
        """Insert undirected edge {u,v} of weight w.  Returns its index."""
        if not (0 <= u < self.n) or not (0 <= v < self.n):
            raise ValueError(f"endpoint out of range: ({u},{v}) with n={self.n}")
        if u == v:
            raise ValueError(f"self-loop rejected at vertex {u}")
        w = float(w)
        if not math.isfinite(w) or w < 1.0 or w > self.max_weight:
            raise ValueError(
                f"weight {w!r} outside [1, {self.max_weight:g}] for edge ({u},{v})")
        self._push_arc(u, v, w)
        self._push_arc(v, u, w)
        self.m += 1
        if w > self.W:
            self.W = w
        return self.m - 1

    # -- kernel views -----------------------------------------------------

    def arrays(self):
        """(first, eto, enxt, ew, arc_count) views for the kernels."""
        return self._first, self._eto, self._enxt, self._ew, self._arc_count

    def rounded_weights(self, base: float) -> np.ndarray:
        """Arc weights rounded up to powers of `base`, cached per base and
        extended lazily as edges arrive."""
        entry = self._rounded.get(base)
        if entry is None:
            entry = [np.empty(self._eto.shape[0], dtype=np.float64), 0]
            self._rounded[base] = entry
        arr, filled = entry
        if filled < self._arc_count:
            arr[filled:self._arc_count] = round_up_pow_array(
                self._ew[filled:self._arc_count], base)
            entry[1] = self._arc_count
        return arr

    def degree_nonzero(self, v: int) -> bool:
        return self._first[v] != -1

    def incident_vertices(self) -> np.ndarray:
        """Vertices with at least one incident edge, ascending."""
        return np.flatnonzero(self._first != -1).astype(np.int64)

    # -- exact distances --------------------------------------------------

    def distances(self, sources) -> tuple[np.ndarray, np.ndarray]:
        """Exact multi-source distances.  Returns (dist, src) with src the
        nearest source, ties to the smallest source id; src=-1 unreachable."""
        dist = np.full(self.n, math.inf, dtype=np.float64)
        src = np.full(self.n, np.iinfo(np.int64).max, dtype=np.int64)
        seeds = np.asarray(sorted(int(s) for s in sources), dtype=np.int64)
        if seeds.size == 0:
            src[:] = -1
            return dist, src
        if seeds.size and (seeds[0] < 0 or seeds[-1] >= self.n):
            raise ValueError("source out of range")
        dist[seeds] = 0.0
        src[seeds] = seeds
        first, eto, enxt, ew, cnt = self.arrays()
        kernels.dijkstra_update(self.n, first, eto, enxt, ew, cnt, dist, src, seeds)
        src[dist == math.inf] = -1
        return dist, src


def new_graph(n: int) -> DynGraph:
    return DynGraph(n)


def insert_edge(g: DynGraph, u: int, v: int, w: float) -> int:
    return g.insert_edge(u, v, w)


def exact_distance(g: DynGraph, sources, v: int) -> float:
    """Exact dist(sources, v); inf when unreachable, inf for empty sources."""
    dist, _ = g.distances(sources)
    return float(dist[v])


# -- edge stream files ----------------------------------------------------
#
# Format: first line "n <count>", then one "e <u> <v> <w>" per insertion.
# Blank lines and lines starting with '#' are skipped.  Anything else is a
# parse error reported with its 1-based line number (the CLI exits with
# status 2 on it).

@dataclass
class Stream:
    n: int
    edges: list  # list of (u, v, w)


def parse_stream(text: str) -> Stream:
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if parts[0] != "n" or len(parts) != 2:
                raise StreamParseError(lineno, f"expected 'n <count>', got {raw!r}")
            try:
                n = int(parts[1])
            except ValueError:
                raise StreamParseError(lineno, f"bad vertex count {parts[1]!r}") from None
            if n < 1:
                raise StreamParseError(lineno, f"vertex count must be >= 1, got {n}")
            continue
        if parts[0] != "e" or len(parts) != 4:
            raise StreamParseError(lineno, f"expected 'e <u> <v> <w>', got {raw!r}")
        try:
            u, v = int(parts[1]), int(parts[2])
            w = float(parts[3])
        except ValueError:
            raise StreamParseError(lineno, f"bad edge fields in {raw!r}") from None
        edges.append((u, v, w))
    if n is None:
        raise StreamParseError(1, "empty stream: missing 'n <count>' header")
    return Stream(n=n, edges=edges)


def read_stream(path) -> Stream:
    with open(path, encoding="utf-8") as fh:
        return parse_stream(fh.read())


def write_stream(path, stream: Stream):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"n {stream.n}\n")
        for u, v, w in stream.edges:
            wtxt = f"{int(w)}" if float(w).is_integer() else repr(float(w))
            fh.write(f"e {u} {v} {wtxt}\n")

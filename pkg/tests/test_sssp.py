"""Distance oracle: sandwich bounds, monotone estimates, exact change logs."""

import logging
import math

import numpy as np
import pytest

from dynclust.graph import DynGraph
from dynclust.powers import is_on_grid
from dynclust.sssp import (DistanceOracle, oracle_extend_sources, oracle_init,
                           oracle_insert)


def _star(leaves=3, w=1.0):
    g = DynGraph(leaves + 1)
    for i in range(1, leaves + 1):
        g.insert_edge(0, i, w)
    return g


def _random_graph(rng, n, m, wmax=16):
    g = DynGraph(n)
    edges = []
    while len(edges) < m:
        u, v = int(rng.integers(n)), int(rng.integers(n))
        if u != v:
            edges.append((u, v, float(rng.integers(1, wmax + 1))))
    for (u, v, w) in edges:
        g.insert_edge(u, v, w)
    return g


def test_init_requires_sources_and_eps():
    g = _star()
    with pytest.raises(ValueError):
        DistanceOracle(g, [], 0.1)
    with pytest.raises(ValueError):
        DistanceOracle(g, [0], 0.0)
    with pytest.raises(ValueError):
        DistanceOracle(g, [99], 0.1)


def test_star_center_source_is_exact_on_leaves():
    g = _star(3, 1.0)
    o = DistanceOracle(g, [0], 0.1)
    assert o.value(0) == 0.0
    for leaf in (1, 2, 3):
        assert 1.0 <= o.value(leaf) <= 1.1
        assert o.attribution(leaf) == 0


def test_all_vertices_sources_gives_zero():
    g = _star(3)
    o = DistanceOracle(g, [0, 1, 2, 3], 0.1)
    assert np.all(o.delta == 0.0)


def test_sandwich_against_exact(seed=0):
    rng = np.random.default_rng(seed)
    g = _random_graph(rng, n=6, m=10)
    o = DistanceOracle(g, [0, 3], 0.1)
    exact, _ = g.distances([0, 3])
    for v in range(6):
        if exact[v] == math.inf:
            assert o.value(v) == math.inf
        else:
            assert exact[v] <= o.value(v) <= 1.1 * exact[v] + 1e-12


def test_insert_between_sources_changes_nothing():
    g = _star(3)
    o = DistanceOracle(g, [1, 2], 0.1)
    g.insert_edge(1, 2, 1.0)
    assert o.insert(1, 2, 1.0).size == 0


def test_insert_shortcut_reports_the_improved_vertex():
    g = DynGraph(3)
    g.insert_edge(0, 1, 5.0)
    g.insert_edge(1, 2, 5.0)
    o = DistanceOracle(g, [0], 0.1)
    assert o.value(2) >= 10.0
    g.insert_edge(0, 2, 1.0)
    changed = o.insert(0, 2, 1.0)
    assert 2 in changed.tolist()
    assert o.value(2) <= 1.1


def test_insert_heavy_edge_reports_nothing():
    g = DynGraph(3)
    g.insert_edge(0, 1, 2.0)
    g.insert_edge(1, 2, 2.0)
    o = DistanceOracle(g, [0], 0.1)
    g.insert_edge(0, 2, 80.0)
    assert o.insert(0, 2, 80.0).size == 0


def test_extend_sources_isolated_vertex():
    g = DynGraph(4)
    g.insert_edge(0, 1, 1.0)
    o = DistanceOracle(g, [0], 0.1)
    before = o.delta.copy()
    changed = o.extend_sources([3])
    assert o.value(3) == 0.0
    assert 3 in changed.tolist()
    others = [v for v in range(4) if v != 3]
    assert np.array_equal(o.delta[others], before[others])


def test_extend_sources_relaxes_neighbors():
    g = DynGraph(3)
    g.insert_edge(0, 1, 10.0)
    g.insert_edge(1, 2, 1.0)
    o = DistanceOracle(g, [0], 0.1)
    assert o.value(2) >= 11.0
    changed = o.extend_sources([2])
    assert o.value(1) <= 1.1
    assert {1, 2} <= set(changed.tolist())


def test_extend_sources_readd_is_logged_noop(caplog):
    g = _star(2)
    o = DistanceOracle(g, [0], 0.1)
    with caplog.at_level(logging.DEBUG, logger="dynclust"):
        changed = o.extend_sources([0])
    assert changed.size == 0
    assert any("already a source" in r.message for r in caplog.records)


@pytest.mark.parametrize("seed", range(8))
def test_stream_sandwich_monotone_and_exact_changelog(seed):
    rng = np.random.default_rng(200 + seed)
    n = 30
    g = DynGraph(n)
    o = DistanceOracle(g, [0, 1], 0.25)
    for step in range(150):
        u, v = int(rng.integers(n)), int(rng.integers(n))
        if u == v:
            continue
        w = float(rng.integers(1, 12))
        g.insert_edge(u, v, w)
        before = o.delta.copy()
        changed = set(o.insert(u, v, w).tolist())
        after = o.delta
        # estimates never increase, and the change set is exactly the
        # strictly-decreased vertices
        assert np.all(after <= before)
        decreased = set(np.flatnonzero(after < before).tolist())
        assert changed == decreased
        exact, _ = g.distances([0, 1])
        reach = exact < math.inf
        assert np.all(after[reach] >= exact[reach] - 1e-12)
        assert np.all(after[reach] <= 1.25 * exact[reach] + 1e-12)
        assert np.all(after[~reach] == math.inf)


def test_reported_values_live_on_the_grid():
    rng = np.random.default_rng(5)
    g = _random_graph(rng, n=25, m=80)
    o = DistanceOracle(g, [0], 0.1)
    for v in range(25):
        d = o.value(v)
        if d not in (0.0, math.inf):
            assert is_on_grid(d, o.base)


def test_distinct_reported_values_stay_logarithmic():
    # n=30, weights <= 12: reported values are grid powers within [1, n*W],
    # so the count of distinct finite nonzero values is at most
    # log_base(n*W) + 1
    rng = np.random.default_rng(42)
    n = 30
    g = _random_graph(rng, n, 120, wmax=12)
    o = DistanceOracle(g, [3], 0.2)
    vals = {o.value(v) for v in range(n)} - {0.0, math.inf}
    bound = math.log(n * 12) / math.log(o.base) + 1
    assert len(vals) <= bound


def test_attribution_follows_relaxation_paths():
    g = DynGraph(5)
    g.insert_edge(0, 2, 1.0)
    g.insert_edge(1, 3, 1.0)
    g.insert_edge(2, 4, 1.0)
    o = DistanceOracle(g, [0, 1], 0.1)
    assert o.attribution(2) == 0
    assert o.attribution(3) == 1
    assert o.attribution(4) == 0
    assert o.attribution(0) == 0 and o.attribution(1) == 1
    # vertex with no path yet
    g2 = DynGraph(2)
    o2 = DistanceOracle(g2, [0], 0.1)
    assert o2.attribution(1) == -1


def test_wrappers_delegate():
    g = _star(2)
    o = oracle_init(g, [0], 0.1)
    g.insert_edge(1, 2, 1.0)
    oracle_insert(o, 1, 2, 1.0)
    oracle_extend_sources(o, [2])
    assert o.value(2) == 0.0

import itertools
import random

import pytest

from lightspan.blackbox import (
    SpannerContract,
    greedy_spanner,
    unweighted_spanner,
    weighted_spanner,
)
from lightspan.graph import WeightedGraph

from oracles import bfs_hops, max_edge_stretch, prim_mst_weights, random_connected_edges, stretch_violations


def complete(n, w=1.0):
    return WeightedGraph(n, [(u, v, w) for u, v in itertools.combinations(range(n), 2)])


def hop_ok(g, kept, k):
    sub = [g.edges[i] for i in kept]
    cache = {}
    for u, v, _ in g.edges:
        if u not in cache:
            cache[u] = bfs_hops(g.n, sub, u)
        if cache[u][v] > 2 * k - 1:
            return False
    return True


def test_contract():
    c = SpannerContract("greedy", 3)
    assert c.stretch == 5
    assert SpannerContract("weighted-fast", 1).stretch == 1
    with pytest.raises(ValueError):
        SpannerContract("nope", 2)
    with pytest.raises(ValueError):
        SpannerContract("greedy", 0)


def test_unweighted_k1_is_identity():
    g = complete(6)
    assert unweighted_spanner(g, 1, seed=3) == list(range(g.m))


def test_unweighted_k1_keeps_one_of_each_parallel_pair():
    g = WeightedGraph(3, [(0, 1, 1.0), (1, 0, 1.0), (1, 2, 1.0)])
    kept = unweighted_spanner(g, 1, seed=0)
    assert 2 in kept and len(kept) == 2


@pytest.mark.parametrize("seed", range(5))
def test_unweighted_k8_complete(seed):
    g = complete(8)
    kept = unweighted_spanner(g, 2, seed)
    assert set(kept) <= set(range(g.m))
    assert hop_ok(g, kept, 2)


def test_unweighted_size_fit_n256():
    n, k = 256, 3
    sizes = []
    for seed in range(20):
        rng = random.Random(seed)
        g = WeightedGraph(n, random_connected_edges(n, 20 * n, rng))
        kept = unweighted_spanner(g, k, seed)
        assert hop_ok(g, kept, k)
        sizes.append(len(kept))
    mean = sum(sizes) / len(sizes)
    # fitted constant; observed mean/n^(4/3) is about 0.8
    assert mean <= 2.0 * n ** (1 + 1 / k)


def test_weighted_tree_is_kept_whole():
    rng = random.Random(4)
    g = WeightedGraph(50, random_connected_edges(50, 0, rng))
    for k in (1, 2, 3):
        assert weighted_spanner(g, k, seed=1) == list(range(49))


def test_weighted_k1_stretch_one():
    rng = random.Random(8)
    g = WeightedGraph(30, random_connected_edges(30, 100, rng))
    kept = weighted_spanner(g, 1, seed=2)
    assert max_edge_stretch(g.n, g.edges, [g.edges[i] for i in kept]) <= 1.0


@pytest.mark.parametrize("k", [2, 3, 4])
def test_weighted_stretch_n200(k):
    for seed in range(3):
        rng = random.Random(1000 * k + seed)
        g = WeightedGraph(200, random_connected_edges(200, 1500, rng, 1, 1000, parallel=True))
        kept = weighted_spanner(g, k, seed)
        sub = [g.edges[i] for i in kept]
        assert stretch_violations(g.n, g.edges, sub, 2 * k - 1) == []


def test_weighted_deterministic_per_seed():
    rng = random.Random(9)
    g = WeightedGraph(100, random_connected_edges(100, 800, rng))
    assert weighted_spanner(g, 3, 5) == weighted_spanner(g, 3, 5)
    assert unweighted_spanner(g, 3, 5) == unweighted_spanner(g, 3, 5)


def test_greedy_infinite_stretch_gives_mst():
    rng = random.Random(12)
    for _ in range(20):
        n = rng.randint(2, 50)
        edges = random_connected_edges(n, rng.randint(0, 4 * n), rng)
        g = WeightedGraph(n, edges)
        kept = greedy_spanner(g, 1e300)
        assert sorted(g.edges[i][2] for i in kept) == sorted(prim_mst_weights(n, edges))


def test_greedy_unit_triangle_t1():
    g = WeightedGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])
    assert greedy_spanner(g, 1) == [0, 1, 2]


def test_greedy_drops_heavy_edge():
    g = WeightedGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 2.5)])
    assert greedy_spanner(g, 3) == [0, 1]


def test_greedy_equal_distance_is_not_added():
    # distance 2 equals t*w exactly: the edge is not needed
    g = WeightedGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])
    assert greedy_spanner(g, 2) == [0, 1]


def test_greedy_dedups_parallel_edges():
    g = WeightedGraph(2, [(0, 1, 3.0), (1, 0, 2.0), (0, 1, 2.0)])
    assert greedy_spanner(g, 1) == [1]


def test_greedy_rejects_small_t():
    with pytest.raises(ValueError):
        greedy_spanner(complete(3), 0.5)


def brute_greedy(g, t):
    """Greedy with a full Dijkstra per edge, no shortcuts."""
    from oracles import dijkstra

    best = {}
    for i, (u, v, w) in enumerate(g.edges):
        key = (min(u, v), max(u, v))
        if key not in best or (w, i) < (g.edges[best[key]][2], best[key]):
            best[key] = i
    kept = []
    for i in sorted(best.values(), key=lambda i: (g.edges[i][2], i)):
        u, v, w = g.edges[i]
        if dijkstra(g.n, [g.edges[j] for j in kept], u)[v] > t * w:
            kept.append(i)
    return sorted(kept)


@pytest.mark.parametrize("t", [1.0, 1.5, 3.0, 5.0, 11.0])
def test_greedy_matches_brute_force(t):
    rng = random.Random(int(t * 10))
    for _ in range(15):
        n = rng.randint(2, 40)
        g = WeightedGraph(n, random_connected_edges(n, rng.randint(0, 5 * n), rng, 1, 20, parallel=True))
        assert greedy_spanner(g, t) == brute_greedy(g, t)


def test_greedy_stretch_and_size():
    n, k = 300, 3
    rng = random.Random(3)
    g = WeightedGraph(n, random_connected_edges(n, 8 * n, rng, 1, 100))
    kept = greedy_spanner(g, 2 * k - 1)
    assert stretch_violations(g.n, g.edges, [g.edges[i] for i in kept], 2 * k - 1) == []
    assert len(kept) <= n ** (1 + 1 / k)

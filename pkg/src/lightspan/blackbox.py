"""Sparse spanner algorithms used as black boxes by the light-spanner transform.

* :func:`weighted_spanner` -- randomized cluster-growing (2k-1)-spanner,
  expected ``O(k * n^(1+1/k))`` edges, ``O(k * m)`` time.
* :func:`unweighted_spanner` -- the same clustering on unit weights; every
  edge gets a path of at most ``2k-1`` hops.
* :func:`greedy_spanner` -- the classical greedy t-spanner.

All three return sorted lists of edge refs into the input graph.
"""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass

from .graph import WeightedGraph
from .mst import UnionFind

KINDS = ("unweighted", "weighted-fast", "greedy")


@dataclass(frozen=True)
class SpannerContract:
    kind: str
    k: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown black-box kind {self.kind!r}")
        if self.k < 1:
            raise ValueError("k must be >= 1")

    @property
    def stretch(self) -> int:
        return 2 * self.k - 1

    @property
    def size_class(self) -> str:
        if self.kind == "greedy":
            return "O(n^(1+1/k))"
        return "O(k*n^(1+1/k)) expected"


def cluster_spanner(n: int, edges, k: int, rng: random.Random, unit: bool = False) -> list[int]:
    """Randomized clustering spanner over ``edges[i] = (u, v, w)``.

    Runs k-1 clustering rounds, sampling clusters with probability
    ``n**(-1/k)``, then joins every vertex to each adjacent final cluster.
    Edge order is the strict total order ``(w, i)``, or ``(1, i)`` when
    ``unit`` is set. Parallel edges are handled directly.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    m = len(edges)
    if m == 0:
        return []
    if unit:
        key = list(range(m))
    else:
        order = sorted(range(m), key=lambda i: (edges[i][2], i))
        key = [0] * m
        for rank, i in enumerate(order):
            key[i] = rank
    eu = [e[0] for e in edges]
    ev = [e[1] for e in edges]

    p = n ** (-1.0 / k) if n > 1 else 1.0
    cluster = list(range(n))  # center id, or -1 once a vertex leaves the clustering
    alive = list(range(m))
    kept = set()

    for _ in range(k - 1):
        centers = sorted({c for c in cluster if c >= 0})
        sampled = {c for c in centers if rng.random() < p}

        # lightest residual edge from each unsampled vertex to each adjacent cluster
        best: dict[int, dict[int, int]] = {}
        for i in alive:
            a, b = eu[i], ev[i]
            ca, cb = cluster[a], cluster[b]
            if ca not in sampled:
                d = best.setdefault(a, {})
                j = d.get(cb)
                if j is None or key[i] < key[j]:
                    d[cb] = i
            if cb not in sampled:
                d = best.setdefault(b, {})
                j = d.get(ca)
                if j is None or key[i] < key[j]:
                    d[ca] = i

        new_cluster = [c if c in sampled else -1 for c in cluster]
        dropped: dict[int, set[int] | None] = {}  # None: every edge at the vertex goes
        for v, nearest in best.items():
            joinable = [(key[i], c) for c, i in nearest.items() if c in sampled]
            if not joinable:
                kept.update(nearest.values())
                dropped[v] = None
                continue
            join_key, target = min(joinable)
            kept.add(nearest[target])
            new_cluster[v] = target
            gone = {target}
            for c, i in nearest.items():
                if key[i] < join_key:
                    kept.add(i)
                    gone.add(c)
            dropped[v] = gone

        survivors = []
        for i in alive:
            a, b = eu[i], ev[i]
            na, nb = new_cluster[a], new_cluster[b]
            if na < 0 or nb < 0 or na == nb:
                continue
            if a in dropped and cluster[b] in dropped[a]:
                continue
            if b in dropped and cluster[a] in dropped[b]:
                continue
            survivors.append(i)
        alive = survivors
        cluster = new_cluster

    # final round: every vertex keeps its lightest edge to each adjacent cluster
    final: dict[tuple[int, int], int] = {}
    for i in alive:
        a, b = eu[i], ev[i]
        for x, c in ((a, cluster[b]), (b, cluster[a])):
            j = final.get((x, c))
            if j is None or key[i] < key[j]:
                final[(x, c)] = i
    kept.update(final.values())
    return sorted(kept)


def weighted_spanner(g: WeightedGraph, k: int, seed: int = 0) -> list[int]:
    """(2k-1)-spanner of a weighted (multi)graph."""
    return cluster_spanner(g.n, g.edges, k, random.Random(seed))


def unweighted_spanner(g: WeightedGraph, k: int, seed: int = 0) -> list[int]:
    """Hop-stretch (2k-1) spanner; weights are ignored."""
    return cluster_spanner(g.n, g.edges, k, random.Random(seed), unit=True)


def greedy_spanner(g: WeightedGraph, t: float) -> list[int]:
    """Greedy t-spanner.

    Edges are scanned by ``(weight, ref)``; an edge is added when the current
    spanner distance between its endpoints exceeds ``t * w`` (or they are
    not yet connected). Parallel edges collapse to the lightest one first.
    """
    if not t >= 1:
        raise ValueError("stretch t must be >= 1")
    simple, origin = g.simplify()
    adj: list[list[tuple[int, float]]] = [[] for _ in range(g.n)]
    uf = UnionFind(g.n)
    kept = []
    edges = simple.edges
    for i in sorted(range(len(edges)), key=lambda i: (edges[i][2], i)):
        u, v, w = edges[i]
        # different components: no search needed
        if uf.union(u, v) or not _within(adj, u, v, t * w):
            adj[u].append((v, w))
            adj[v].append((u, w))
            kept.append(origin[i])
    return sorted(kept)


def _within(adj, s: int, target: int, limit: float) -> bool:
    """True iff a path from ``s`` to ``target`` of length <= ``limit`` exists.

    Bidirectional Dijkstra, alternating sides, stopping once the two
    frontiers together exceed the best meeting length or the limit.
    """
    dist = ({s: 0.0}, {target: 0.0})
    heaps = ([(0.0, s)], [(0.0, target)])
    done = (set(), set())
    best = math.inf
    while heaps[0] and heaps[1]:
        if heaps[0][0][0] + heaps[1][0][0] >= min(best, math.nextafter(limit, math.inf)):
            break
        side = 0 if len(heaps[0]) <= len(heaps[1]) else 1
        d, x = heapq.heappop(heaps[side])
        if x in done[side]:
            continue
        done[side].add(x)
        mine, other = dist[side], dist[1 - side]
        for y, w in adj[x]:
            nd = d + w
            if nd > limit:
                continue
            if nd < mine.get(y, math.inf):
                mine[y] = nd
                heapq.heappush(heaps[side], (nd, y))
            if y in other:
                best = min(best, nd + other[y])
    return best <= limit

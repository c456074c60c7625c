"""Augmented-streaming simulation: a sort pass, an MST pass, and a dispatch pass.

The harness only exposes the edge sequence through :meth:`StreamHarness.stream`,
which counts passes. Pass 1 runs Kruskal with union-find over the sorted
stream; the backbone and per-level interval indexes are computed between
passes; pass 2 routes each edge to the one-pass spanner instance of its
weight bucket, skipping edges inside a single interval.

Memory is reported in model units (resident edges and bookkeeping words),
not bytes.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field, replace
from typing import Iterator

from .graph import WeightedGraph
from .lightsp import (
    LevelStats,
    Scales,
    SpannerResult,
    check_parameters,
    plan_intervals,
    stretch_bound,
)
from .mst import Backbone, DisconnectedGraphError, UnionFind, build_backbone

StreamEdge = tuple[int, int, int, float]  # (position in input, u, v, w)


class StreamHarness:
    """Replayable edge stream with pass accounting and no random access."""

    def __init__(self, edges):
        self._edges = [(int(u), int(v), float(w)) for u, v, w in edges]
        self._order = list(range(len(self._edges)))
        self.pass_count = 0
        self.sorted = False
        self.touches = 0

    @classmethod
    def from_graph(cls, g: WeightedGraph) -> "StreamHarness":
        return cls(g.edges)

    def stream(self) -> Iterator[StreamEdge]:
        """One pass over the current edge order."""
        self.pass_count += 1
        for i in self._order:
            u, v, w = self._edges[i]
            self.touches += 1
            yield i, u, v, w


def sort_pass(h: StreamHarness) -> None:
    """Reorder the stream by weight (stable on input position); counts as a pass."""
    keyed = [(w, i) for i, _, _, w in h.stream()]
    keyed.sort()
    h._order = [i for _, i in keyed]
    h.sorted = True


@dataclass
class Pass1Stats:
    unions: int
    rejected: int
    finds: int
    find_steps: int
    steps_per_edge: float


def pass1_mst(h: StreamHarness, n: int) -> tuple[Backbone, Pass1Stats]:
    if not h.sorted:
        raise RuntimeError("pass 1 requires a preceding sort pass")
    uf = UnionFind(n)
    tree = []  # (position, u, v, w) of accepted edges
    seen = 0
    for i, u, v, w in h.stream():
        seen += 1
        if uf.union(u, v):
            tree.append((i, u, v, w))
    if len(tree) != max(n - 1, 0):
        root = uf.find(0)
        other = next(x for x in range(n) if uf.find(x) != root)
        raise DisconnectedGraphError(0, other)
    # path compression + union by rank: O((m + n) alpha(n)) pointer hops; alpha <= 4 in practice
    assert uf.steps <= 8 * (2 * seen + n), (uf.steps, seen, n)
    # between passes: only the n-1 tree edges are resident
    tree.sort()
    t = WeightedGraph(n, ((u, v, w) for _, u, v, w in tree))
    local = build_backbone(t, range(len(tree)))
    backbone = replace(local, tree_edges=tuple(i for i, _, _, _ in tree))
    stats = Pass1Stats(
        unions=uf.unions,
        rejected=seen - uf.unions,
        finds=uf.finds,
        find_steps=uf.steps,
        steps_per_edge=uf.steps / seen if seen else 0.0,
    )
    return backbone, stats


class StreamingSpanner:
    """One-pass (2k-1)-spanner over an edge stream of hashable vertex labels.

    Every vertex draws a sampling level (``P(level >= i) = p^i``, capped at
    ``k - 1``) on first sight. A vertex belongs to one cluster at a time,
    identified by its center, and sits at most ``level`` hops from that
    center through kept edges. For an arriving edge, the endpoint at the
    lower level either joins the other side's cluster (when that center's
    sampling level reaches one above the other side's level) or keeps one
    edge per distinct neighbouring cluster. Edges inside a cluster, or into
    a cluster the endpoint already has an edge to, are skipped; both have a
    path of at most ``2k - 1`` earlier edges, so on a weight-sorted stream
    the stretch also holds for weights.
    """

    def __init__(self, k: int, p: float, rng: random.Random):
        self.k = k
        self.p = p
        self.rng = rng
        self.sample: dict = {}
        self.level: dict = {}
        self.center: dict = {}
        self.links: dict = {}
        self.kept: list = []  # payloads of kept edges, in arrival order
        self.processed = 0

    def _touch(self, x) -> None:
        if x in self.level:
            return
        s = 0
        while s < self.k - 1 and self.rng.random() < self.p:
            s += 1
        self.sample[x] = s
        self.level[x] = 0
        self.center[x] = x
        self.links[x] = set()

    def process(self, a, b, payload) -> bool:
        """Feed one edge; returns True if it was kept."""
        self.processed += 1
        self._touch(a)
        self._touch(b)
        center, level = self.center, self.level
        if center[a] == center[b]:
            return False
        la, lb = level[a], level[b]
        if la > lb or (la == lb and self.sample[center[a]] > la and self.sample[center[b]] <= lb):
            a, b = b, a
            la, lb = lb, la
        c = center[b]
        if self.sample[c] > lb:
            level[a] = lb + 1
            center[a] = c
        elif c in self.links[a]:
            return False
        else:
            self.links[a].add(c)
        self.kept.append(payload)
        return True

    @property
    def resident_edges(self) -> int:
        return len(self.kept)

    @property
    def vertices(self) -> int:
        return len(self.level)


@dataclass
class StreamResult:
    spanner: SpannerResult
    pass_count: int
    pass1: Pass1Stats
    backbone: Backbone
    touches_pass2: int
    skipped_internal: int
    forwarded: list[int]  # per instance, edges delivered
    resident_edges: list[int]  # per instance, kept at completion
    bookkeeping_words: int
    hop_stretch_bound: float
    weighted_stretch_bound: float
    timings: dict = field(default_factory=dict)

    @property
    def peak_resident_edges(self) -> int:
        # instances only ever add edges, so the final count is the peak
        return sum(self.resident_edges)

    @property
    def memory_words(self) -> int:
        return self.peak_resident_edges + self.bookkeeping_words


def pass2_dispatch(h: StreamHarness, backbone: Backbone, k: int, q: float, rho: float, seed: int):
    n = backbone.n
    scales = Scales.build(n, backbone.length, rho)
    levels = scales.levels
    inds: list[tuple[int, ...]] = [tuple(range(n))]
    occupied = [n]
    for j in range(1, levels + 1):
        xi = scales.xi(j)
        n_intervals = max(1, math.ceil(q * backbone.length / xi))
        ind = plan_intervals(backbone.pos, xi / q, n_intervals)
        inds.append(ind)
        occupied.append(len(set(ind)))
    instances = []
    for j in range(levels + 1):
        size = occupied[j]
        p = size ** (-1.0 / k) if size > 1 else 1.0
        instances.append(StreamingSpanner(k, p, random.Random(seed * 1_000_003 + j)))

    forwarded = [0] * (levels + 1)
    bucket_sizes = [0] * (levels + 1)
    skipped = 0
    discarded = 0
    touches = 0
    kept_refs: list[list[int]] = [[] for _ in range(levels + 1)]
    for i, u, v, w in h.stream():
        touches += 1
        j = scales.bucket_of(w)
        if j > levels:
            discarded += 1
            continue
        bucket_sizes[j] += 1
        ind = inds[j]
        a, b = ind[u], ind[v]
        if a == b:
            skipped += 1
            continue
        forwarded[j] += 1
        if instances[j].process(a, b, i):
            kept_refs[j].append(i)
    return scales, instances, kept_refs, forwarded, bucket_sizes, skipped, discarded, touches, occupied


def run_stream(g: WeightedGraph, k: int, q: float, rho: float = 2.0, seed: int = 0) -> StreamResult:
    """Full simulation: sort pass, MST pass, dispatch pass."""
    check_parameters(k, q, rho)
    if g.n < 2:
        raise ValueError("streaming construction needs at least two vertices")
    clock = time.perf_counter
    timings = {}
    h = StreamHarness.from_graph(g)

    t0 = clock()
    sort_pass(h)
    timings["sort_pass"] = clock() - t0
    t0 = clock()
    backbone, p1 = pass1_mst(h, g.n)
    timings["pass1"] = clock() - t0
    t0 = clock()
    scales, instances, kept_refs, forwarded, bucket_sizes, skipped, discarded, touches, occupied = pass2_dispatch(
        h, backbone, k, q, rho, seed
    )
    timings["pass2"] = clock() - t0

    kept = set(backbone.tree_edges)
    level_stats = []
    for j, refs in enumerate(kept_refs):
        kept.update(refs)
        level_stats.append(
            LevelStats(j, bucket_sizes[j], forwarded[j], forwarded[j], len(refs),
                       g.total_weight(refs), instances[j].vertices)
        )
    edges = sorted(kept)
    weighted_bound = stretch_bound(k, q, rho, "basic")
    hop_bound = stretch_bound(k, q, rho, "unweighted")
    spanner = SpannerResult(
        edges=edges,
        declared_stretch=weighted_bound,
        k=k, q=q, rho=rho, variant="stream", seed=seed,
        n=g.n, m=g.m,
        tree_edges=list(backbone.tree_edges),
        path_length=backbone.length,
        mst_weight=backbone.tree_weight,
        levels=scales.levels,
        level_stats=level_stats,
        discarded=discarded,
        total_weight=g.total_weight(edges),
        timings=timings,
        level_edges={j: sorted(r) for j, r in enumerate(kept_refs)},
    )
    return StreamResult(
        spanner=spanner,
        pass_count=h.pass_count,
        pass1=p1,
        backbone=backbone,
        touches_pass2=touches,
        skipped_internal=skipped,
        forwarded=forwarded,
        resident_edges=[inst.resident_edges for inst in instances],
        bookkeeping_words=g.n * (scales.levels + 1),
        hop_stretch_bound=hop_bound,
        weighted_stretch_bound=weighted_bound,
        timings=timings,
    )

"""Exact stretch, hop-stretch, size and lightness checks for a claimed spanner."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra, shortest_path

from .graph import WeightedGraph
from .mst import build_mst

# A ratio only counts as a violation above bound * (1 + FLOAT_GUARD); sums of
# at most n doubles cannot drift that far.
FLOAT_GUARD = 2.0**-40
_BATCH = 256


@dataclass
class VerificationReport:
    bound: float
    max_observed_stretch: float
    violations: list[tuple[int, float, float]]  # (edge ref, observed, bound)
    borderline: list[tuple[int, float, float]]
    edge_count: int
    total_weight: float
    lightness: float
    elapsed: float
    checked: int
    distances: dict = field(default_factory=dict, repr=False)  # edge ref -> spanner distance

    @property
    def ok(self) -> bool:
        return not self.violations


def _matrix(n: int, edges, unit: bool = False) -> csr_matrix:
    # csgraph sums duplicate entries, so collapse parallel edges to their minimum
    best: dict[tuple[int, int], float] = {}
    for u, v, w in edges:
        key = (u, v) if u < v else (v, u)
        w = 1.0 if unit else w
        if w < best.get(key, math.inf):
            best[key] = w
    if not best:
        return csr_matrix((n, n))
    rows = np.fromiter((a for a, _ in best), dtype=np.int64, count=len(best))
    cols = np.fromiter((b for _, b in best), dtype=np.int64, count=len(best))
    vals = np.fromiter(best.values(), dtype=np.float64, count=len(best))
    return csr_matrix((vals, (rows, cols)), shape=(n, n))


def _check_subset(g: WeightedGraph, h) -> list[int]:
    refs = sorted(set(int(i) for i in h))
    if refs and (refs[0] < 0 or refs[-1] >= g.m):
        raise ValueError("spanner refers to edges outside the graph")
    return refs


def _per_edge(g: WeightedGraph, refs: list[int], unit: bool) -> dict[int, float]:
    """Spanner distance from each edge's first endpoint to its second.

    Searches start at the edge's first endpoint ``u``, so each value is the
    left-to-right path sum from ``u``.
    """
    mat = _matrix(g.n, (g.edges[i] for i in refs), unit=unit)
    if not g.m:
        return {}
    src = np.fromiter((e[0] for e in g.edges), dtype=np.int64, count=g.m)
    dst = np.fromiter((e[1] for e in g.edges), dtype=np.int64, count=g.m)
    sources = np.unique(src)
    row_of = np.empty(g.n, dtype=np.int64)
    out = np.empty(g.m, dtype=np.float64)
    for start in range(0, len(sources), _BATCH):
        chunk = sources[start:start + _BATCH]
        d = dijkstra(mat, directed=False, indices=chunk, unweighted=unit)
        row_of[chunk] = np.arange(len(chunk))
        sel = np.flatnonzero((src >= chunk[0]) & (src <= chunk[-1]))
        out[sel] = d[row_of[src[sel]], dst[sel]]
    return dict(enumerate(out.tolist()))


def _report(g, refs, bound, dist, started, unit) -> VerificationReport:
    violations, borderline = [], []
    worst = 0.0
    for i in range(g.m):
        d = dist[i]
        w = 1.0 if unit else g.edges[i][2]
        ratio = d / w
        worst = max(worst, ratio)
        if d > bound * w:
            if d > bound * w * (1 + FLOAT_GUARD):
                violations.append((i, ratio, bound))
            else:
                borderline.append((i, ratio, bound))
    count, weight, lightness = measure(g, refs)
    return VerificationReport(
        bound=bound,
        max_observed_stretch=worst,
        violations=violations,
        borderline=borderline,
        edge_count=count,
        total_weight=weight,
        lightness=lightness,
        elapsed=time.perf_counter() - started,
        checked=g.m,
        distances=dist,
    )


def verify_stretch(g: WeightedGraph, h, bound: float) -> VerificationReport:
    """Check ``dist_H(u, v) <= bound * w`` for every edge ``(u, v, w)`` of ``g``.

    Disconnected endpoints are reported with an infinite observed stretch.
    """
    started = time.perf_counter()
    refs = _check_subset(g, h)
    dist = _per_edge(g, refs, unit=False)
    return _report(g, refs, bound, dist, started, unit=False)


def verify_hop_stretch(g: WeightedGraph, h, k: int) -> VerificationReport:
    """Every edge of ``g`` must have a path of at most ``2k - 1`` spanner edges."""
    started = time.perf_counter()
    refs = _check_subset(g, h)
    bound = float(2 * k - 1)
    dist = _per_edge(g, refs, unit=True)
    return _report(g, refs, bound, dist, started, unit=True)


ALL_PAIRS_LIMIT = 512


def verify_all_pairs(g: WeightedGraph, h, bound: float) -> VerificationReport:
    """Pairwise form: ``dist_H(x, y) <= bound * dist_G(x, y)`` for all connected pairs."""
    if g.n > ALL_PAIRS_LIMIT:
        raise ValueError(f"all-pairs verification is limited to n <= {ALL_PAIRS_LIMIT}")
    started = time.perf_counter()
    refs = _check_subset(g, h)
    dg = shortest_path(_matrix(g.n, g.edges), method="D", directed=False)
    dh = shortest_path(_matrix(g.n, (g.edges[i] for i in refs)), method="D", directed=False)
    violations, borderline = [], []
    worst = 0.0
    for x in range(g.n):
        for y in range(x + 1, g.n):
            base = float(dg[x, y])
            if not math.isfinite(base):
                continue
            d = float(dh[x, y])
            ratio = d / base
            worst = max(worst, ratio)
            if d > bound * base:
                # pairs are reported with a pseudo-ref of -1
                entry = (-1, ratio, bound)
                (violations if d > bound * base * (1 + FLOAT_GUARD) else borderline).append(entry)
    count, weight, lightness = measure(g, refs)
    return VerificationReport(
        bound=bound, max_observed_stretch=worst, violations=violations, borderline=borderline,
        edge_count=count, total_weight=weight, lightness=lightness,
        elapsed=time.perf_counter() - started, checked=g.n * (g.n - 1) // 2,
    )


def measure(g: WeightedGraph, h) -> tuple[int, float, float]:
    """``(edge count, total weight, lightness)`` against a fresh exact MST of ``g``."""
    refs = sorted(set(h))
    weight = g.total_weight(refs)
    mst_weight = g.total_weight(build_mst(g)) if g.n > 1 else 0.0
    lightness = weight / mst_weight if mst_weight > 0 else 1.0
    return len(refs), weight, lightness


def match_edges(g: WeightedGraph, h: WeightedGraph) -> list[int]:
    """Edge refs of ``g`` matching the edges of ``h`` (same endpoints and weight)."""
    if h.n != g.n:
        raise ValueError(f"spanner has {h.n} vertices, graph has {g.n}")
    pool: dict[tuple[int, int, float], list[int]] = {}
    for i, (u, v, w) in enumerate(g.edges):
        key = (min(u, v), max(u, v), w)
        pool.setdefault(key, []).append(i)
    for refs in pool.values():
        refs.reverse()
    out = []
    for u, v, w in h.edges:
        refs = pool.get((min(u, v), max(u, v), w))
        if not refs:
            raise ValueError(f"spanner edge ({u}, {v}, {w!r}) is not an edge of the graph")
        out.append(refs.pop())
    return sorted(out)

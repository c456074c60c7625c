"""Light spanners from sparse ones: MST backbone, weight buckets, interval representatives.

Edges are bucketed by weight scale relative to ``L / n`` (``L`` the length of
the preorder path of the MST). For every bucket ``j >= 1`` the path is cut into
intervals of length ``xi_j / q``; bucket edges crossing two intervals become
edges between interval representatives, a black-box spanner runs on that
small auxiliary graph, and each kept auxiliary edge is mapped back to its
source edge. The result is the union of the MST, a spanner of the lightest
bucket, and all projected level spanners.
"""

from __future__ import annotations

import bisect
import math
import time
from dataclasses import dataclass, field

from . import blackbox
from .graph import WeightedGraph
from .mst import Backbone, DisconnectedGraphError, build_backbone, build_mst

VARIANTS = ("basic", "unweighted", "sparse")
_VARIANT_ALIASES = {"unweighted-blackbox": "unweighted", "sparse-blackbox": "sparse"}


class ParameterError(ValueError):
    pass


def stretch_bound(k: int, q: float, rho: float = 2.0, variant: str = "basic") -> float:
    """Declared stretch: ``(2k-1)(1+2/q) + 2/q``; the unweighted variant pays a factor rho on the first term."""
    variant = _VARIANT_ALIASES.get(variant, variant)
    factor = rho if variant == "unweighted" else 1.0
    return factor * (2 * k - 1) * (1 + 2 / q) + 2 / q


def check_parameters(k: int, q: float, rho: float) -> None:
    if k < 2:
        raise ParameterError(f"k must be an integer >= 2 (got {k}); the q window is empty at k = 1")
    if not (1 / (2 * k - 1) < q < k):
        raise ParameterError(f"q must lie in (1/(2k-1), k) = ({1 / (2 * k - 1):.6g}, {k}); got {q}")
    if not (1 < rho <= 2):
        raise ParameterError(f"rho must lie in (1, 2]; got {rho}")


def epsilon_to_q(epsilon: float, k: int) -> tuple[float, bool]:
    """Map a stretch slack epsilon to q = 3/epsilon, clamped into the legal window.

    Returns ``(q, clamped)``.
    """
    if not epsilon > 0:
        raise ParameterError("epsilon must be positive")
    q = 3.0 / epsilon
    lo, hi = 1 / (2 * k - 1), float(k)
    if lo < q < hi:
        return q, False
    # nudge strictly inside the open interval
    q = min(max(q, math.nextafter(lo, hi)), math.nextafter(hi, lo))
    return q, True


# --- bucketing ---------------------------------------------------------------


@dataclass(frozen=True)
class Scales:
    """Weight ranges ``W_0 = (0, L/n]`` and ``W_j = (xi_j, rho * xi_j]``.

    ``bounds[j]`` is the closed upper end of ``W_j``; ``xi_j = bounds[j - 1]``.
    Each bound is ``rho`` times the previous one, computed by repeated
    multiplication so adjacent ranges share their endpoint exactly.
    """

    n: int
    length: float
    rho: float
    levels: int
    bounds: tuple[float, ...]

    @classmethod
    def build(cls, n: int, length: float, rho: float) -> "Scales":
        if n < 2 or not length > 0:
            raise ValueError("bucketing needs n >= 2 and a positive path length")
        levels = 0
        power = 1.0
        while power < n:
            power *= rho
            levels += 1
        bounds = [length / n]
        for _ in range(levels):
            bounds.append(bounds[-1] * rho)
        return cls(n, length, rho, levels, tuple(bounds))

    def xi(self, j: int) -> float:
        return self.bounds[j - 1]

    def bucket_of(self, w: float) -> int:
        """Bucket index of weight ``w``; ``levels + 1`` means heavier than every range."""
        b = self.bounds
        if w <= b[0]:
            return 0
        # O(1) guess from the logarithm, corrected against the exact bounds
        j = min(max(math.ceil(math.log(w / b[0], self.rho)), 1), len(b))
        while j > 1 and w <= b[j - 1]:
            j -= 1
        while j < len(b) and w > b[j]:
            j += 1
        return j

    def bucket_of_bisect(self, w: float) -> int:
        return bisect.bisect_left(self.bounds, w)


@dataclass
class Buckets:
    scales: Scales
    levels: list[list[int]]  # levels[j] = edge refs of E_j, ascending
    discarded: list[int]


def bucket_edges(g: WeightedGraph, backbone: Backbone, rho: float) -> Buckets:
    scales = Scales.build(g.n, backbone.length, rho)
    levels: list[list[int]] = [[] for _ in range(scales.levels + 1)]
    discarded = []
    for i, (_, _, w) in enumerate(g.edges):
        j = scales.bucket_of(w)
        if j <= scales.levels:
            levels[j].append(i)
        else:
            discarded.append(i)
    return Buckets(scales, levels, discarded)


# --- interval plans and auxiliary graphs -------------------------------------


@dataclass(frozen=True)
class LevelPlan:
    j: int
    xi: float
    mu: float
    n_intervals: int
    ind: tuple[int, ...]

    @property
    def representatives(self) -> list[int]:
        return sorted(set(self.ind))


def plan_intervals(pos, mu: float, n_intervals: int) -> tuple[int, ...]:
    """Interval index per vertex: ``floor(pos / mu)`` clamped to the last interval."""
    last = n_intervals - 1
    return tuple(min(int(p // mu), last) for p in pos)


def build_level_plan(backbone: Backbone, scales: Scales, j: int, q: float) -> LevelPlan:
    if j < 1:
        raise ValueError("interval plans exist for levels j >= 1")
    xi = scales.xi(j)
    mu = xi / q
    n_intervals = max(1, math.ceil(q * backbone.length / xi))
    return LevelPlan(j, xi, mu, n_intervals, plan_intervals(backbone.pos, mu, n_intervals))


@dataclass
class AuxiliaryGraph:
    """Simple graph on occupied intervals; each edge remembers its source edge."""

    level: int
    vertices: list[int]
    aux_edges: list[tuple[int, int, float, int]]  # (interval a, interval b, weight, source ref)
    crossing: int = 0  # bucket edges whose endpoints lie in different intervals

    def as_graph(self) -> WeightedGraph:
        """Relabel intervals to ``0..|V_j|-1`` for the black box."""
        index = {x: i for i, x in enumerate(self.vertices)}
        return WeightedGraph(len(self.vertices), ((index[a], index[b], w) for a, b, w, _ in self.aux_edges))


def build_auxiliary(g: WeightedGraph, bucket: list[int], plan: LevelPlan) -> AuxiliaryGraph:
    ind = plan.ind
    best: dict[tuple[int, int], int] = {}
    crossing = 0
    edges = g.edges
    for i in bucket:
        u, v, w = edges[i]
        a, b = ind[u], ind[v]
        if a == b:
            continue
        crossing += 1
        pair = (a, b) if a < b else (b, a)
        j = best.get(pair)
        if j is None or (w, i) < (edges[j][2], j):
            best[pair] = i
    aux = [(a, b, edges[i][2], i) for (a, b), i in sorted(best.items())]
    return AuxiliaryGraph(plan.j, plan.representatives, aux, crossing)


# --- construction ------------------------------------------------------------


@dataclass
class LevelStats:
    level: int
    bucket_size: int
    crossing: int
    aux_edges: int
    kept: int
    weight: float
    representatives: int


@dataclass
class SpannerResult:
    """Output of :func:`construct`. ``edges`` are refs into the caller's graph."""

    edges: list[int]
    declared_stretch: float
    k: int
    q: float
    rho: float
    variant: str
    seed: int
    n: int
    m: int
    tree_edges: list[int]
    path_length: float
    mst_weight: float
    levels: int
    level_stats: list[LevelStats]
    discarded: int
    total_weight: float
    timings: dict = field(default_factory=dict)
    level_edges: dict = field(default_factory=dict)  # level -> refs kept at that level

    @property
    def size(self) -> int:
        return len(self.edges)

    @property
    def lightness(self) -> float:
        return self.total_weight / self.mst_weight if self.mst_weight > 0 else 1.0


def _level_seed(seed: int, j: int) -> int:
    return seed * 1_000_003 + j


def _run_blackbox(variant: str, level: int, g: WeightedGraph, k: int, seed: int) -> list[int]:
    if variant == "sparse":
        return blackbox.greedy_spanner(g, 2 * k - 1)
    if variant == "unweighted" and level > 0:
        return blackbox.unweighted_spanner(g, k, seed)
    return blackbox.weighted_spanner(g, k, seed)


def construct(
    g: WeightedGraph,
    k: int,
    q: float,
    rho: float = 2.0,
    variant: str = "basic",
    seed: int = 0,
) -> SpannerResult:
    """Build a light spanner of a connected graph.

    Parallel edges are collapsed to their lightest representative first;
    returned refs point into ``g`` itself.
    """
    variant = _VARIANT_ALIASES.get(variant, variant)
    if variant not in VARIANTS:
        raise ParameterError(f"unknown variant {variant!r}; choose from {', '.join(VARIANTS)}")
    check_parameters(k, q, rho)
    clock = time.perf_counter
    timings = {}
    t_all = clock()

    simple, origin = g.simplify()
    t0 = clock()
    tree = build_mst(simple)
    timings["mst"] = clock() - t0
    if simple.n < 2:
        return _trivial_result(g, simple, origin, tree, k, q, rho, variant, seed, timings, clock() - t_all)

    t0 = clock()
    backbone = build_backbone(simple, tree)
    timings["backbone"] = clock() - t0

    t0 = clock()
    buckets = bucket_edges(simple, backbone, rho)
    timings["bucketing"] = clock() - t0

    kept = set(tree)
    level_edges: dict[int, list[int]] = {}
    stats = []

    t0 = clock()
    sub = WeightedGraph(simple.n, (simple.edges[i] for i in buckets.levels[0]))
    picked = [buckets.levels[0][i] for i in _run_blackbox(variant, 0, sub, k, _level_seed(seed, 0))]
    level_edges[0] = picked
    kept.update(picked)
    stats.append(
        LevelStats(0, len(buckets.levels[0]), len(buckets.levels[0]), sub.m, len(picked),
                   simple.total_weight(picked), simple.n)
    )
    timings["level0"] = clock() - t0

    t0 = clock()
    for j in range(1, buckets.scales.levels + 1):
        bucket = buckets.levels[j]
        plan = build_level_plan(backbone, buckets.scales, j, q) if bucket else None
        if not bucket:
            stats.append(LevelStats(j, 0, 0, 0, 0, 0.0, 0))
            level_edges[j] = []
            continue
        aux = build_auxiliary(simple, bucket, plan)
        picked = []
        if aux.aux_edges:
            chosen = _run_blackbox(variant, j, aux.as_graph(), k, _level_seed(seed, j))
            picked = sorted(aux.aux_edges[i][3] for i in chosen)
        level_edges[j] = picked
        kept.update(picked)
        stats.append(
            LevelStats(j, len(bucket), aux.crossing, len(aux.aux_edges), len(picked),
                       simple.total_weight(picked), len(aux.vertices))
        )
    timings["levels"] = clock() - t0
    timings["total"] = clock() - t_all

    refs = sorted(origin[i] for i in kept)
    return SpannerResult(
        edges=refs,
        declared_stretch=stretch_bound(k, q, rho, variant),
        k=k, q=q, rho=rho, variant=variant, seed=seed,
        n=g.n, m=g.m,
        tree_edges=sorted(origin[i] for i in tree),
        path_length=backbone.length,
        mst_weight=backbone.tree_weight,
        levels=buckets.scales.levels,
        level_stats=stats,
        discarded=len(buckets.discarded),
        total_weight=g.total_weight(refs),
        timings=timings,
        level_edges={j: sorted(origin[i] for i in refs_j) for j, refs_j in level_edges.items()},
    )


def _trivial_result(g, simple, origin, tree, k, q, rho, variant, seed, timings, total):
    timings["total"] = total
    refs = sorted(origin[i] for i in tree)
    return SpannerResult(
        edges=refs, declared_stretch=stretch_bound(k, q, rho, variant),
        k=k, q=q, rho=rho, variant=variant, seed=seed, n=g.n, m=g.m,
        tree_edges=refs, path_length=0.0, mst_weight=0.0, levels=0, level_stats=[],
        discarded=0, total_weight=0.0, timings=timings,
    )


__all__ = [
    "AuxiliaryGraph", "Buckets", "DisconnectedGraphError", "LevelPlan", "LevelStats",
    "ParameterError", "Scales", "SpannerResult", "VARIANTS", "bucket_edges",
    "build_auxiliary", "build_level_plan", "check_parameters", "construct",
    "epsilon_to_q", "plan_intervals", "stretch_bound",
]

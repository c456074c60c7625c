"""Minimum spanning tree, union-find, and the preorder path backbone."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .graph import WeightedGraph, components


class DisconnectedGraphError(ValueError):
    def __init__(self, u: int, v: int):
        self.u, self.v = u, v
        super().__init__(f"graph is disconnected: no path between vertices {u} and {v}")


class UnionFind:
    """Disjoint sets over ``0..n-1`` with path compression and union by rank.

    ``steps`` counts parent-pointer hops taken by :meth:`find`, which is the
    quantity the amortized ``O((m + n) * alpha(n))`` bound is about.

    >>> uf = UnionFind(4)
    >>> uf.union(1, 2)
    True
    >>> uf.find(1) == uf.find(2), uf.find(3)
    (True, 3)
    """

    __slots__ = ("parent", "rank", "steps", "finds", "unions")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n
        self.steps = 0
        self.finds = 0
        self.unions = 0

    def find(self, x: int) -> int:
        self.finds += 1
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
            self.steps += 1
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        """Merge the sets of ``x`` and ``y``; False if they were already one set."""
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        rank = self.rank
        if rank[rx] < rank[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        if rank[rx] == rank[ry]:
            rank[rx] += 1
        self.unions += 1
        return True

    def connected(self, x: int, y: int) -> bool:
        return self.find(x) == self.find(y)


def sorted_edge_order(g: WeightedGraph) -> list[int]:
    """Edge refs in nondecreasing weight, ties by lower ref."""
    edges = g.edges
    return sorted(range(len(edges)), key=lambda i: (edges[i][2], i))


def kruskal(g: WeightedGraph, order: list[int] | None = None) -> tuple[list[int], UnionFind]:
    """Minimum spanning forest over ``order`` (default: sorted order)."""
    if order is None:
        order = sorted_edge_order(g)
    uf = UnionFind(g.n)
    tree = []
    target = g.n - 1
    for i in order:
        u, v, _ = g.edges[i]
        if uf.union(u, v):
            tree.append(i)
            if len(tree) == target:
                break
    return tree, uf


def build_mst(g: WeightedGraph) -> list[int]:
    """Exact MST edge refs (Kruskal, ties by lowest edge ref), sorted ascending."""
    tree, _ = kruskal(g)
    if len(tree) != max(g.n - 1, 0):
        comps = components(g)
        raise DisconnectedGraphError(comps[0][0], comps[1][0])
    return sorted(tree)


@dataclass(frozen=True)
class Backbone:
    """MST plus the Hamiltonian path from its preorder traversal.

    ``pos[v]`` is the offset of ``v`` along the path; consecutive path
    vertices are separated by their tree distance, so ``pos[order[-1]]`` is
    the path length ``L``.
    """

    n: int
    tree_edges: tuple[int, ...]
    order: tuple[int, ...]
    pos: tuple[float, ...]
    length: float
    tree_weight: float

    def path_distance(self, u: int, v: int) -> float:
        return abs(self.pos[u] - self.pos[v])


def build_backbone(g: WeightedGraph, tree: list[int] | tuple[int, ...]) -> Backbone:
    """Preorder the spanning tree from vertex 0 (children by ascending id).

    Each step ``v_i -> v_{i+1}`` climbs from ``v_i`` to the parent of
    ``v_{i+1}`` and then takes one tree edge down, so the gap is summed
    along the actual tree path; every tree edge is walked at most twice.
    """
    n = g.n
    if len(tree) != max(n - 1, 0):
        raise ValueError("tree must have exactly n-1 edges")
    nbrs: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for i in tree:
        u, v, w = g.edges[i]
        nbrs[u].append((v, w))
        nbrs[v].append((u, w))
    parent = [-1] * n
    up_weight = [0.0] * n
    order: list[int] = []
    if n:
        seen = [False] * n
        seen[0] = True
        stack = [0]
        while stack:
            x = stack.pop()
            order.append(x)
            kids = sorted(y for y, _ in nbrs[x] if not seen[y])
            for y, w in nbrs[x]:
                if not seen[y]:
                    seen[y] = True
                    parent[y] = x
                    up_weight[y] = w
            stack.extend(reversed(kids))
        if len(order) != n:
            raise ValueError("tree edges do not span the graph")

    pos = [0.0] * n
    total = 0.0
    for a, b in zip(order, order[1:]):
        # parent[b] is an ancestor of a (or a itself) in preorder
        target = parent[b]
        climb = []
        x = a
        while x != target:
            climb.append(up_weight[x])
            x = parent[x]
        climb.append(up_weight[b])
        total += math.fsum(climb)
        pos[b] = total
    tree_weight = g.total_weight(tree)
    # the preorder walk uses each tree edge at most twice
    assert total <= 2.0 * tree_weight * (1 + 1e-12), (total, tree_weight)
    return Backbone(
        n=n,
        tree_edges=tuple(sorted(tree)),
        order=tuple(order),
        pos=tuple(pos),
        length=total,
        tree_weight=tree_weight,
    )

"""Weighted undirected graphs, the edge-list text format, and seeded generators."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

Edge = tuple[int, int, float]


class GraphFormatError(ValueError):
    """Raised for malformed edge-list input; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class GeneratorError(ValueError):
    pass


class WeightedGraph:
    """Immutable undirected multigraph on vertices ``0..n-1``.

    Edges are addressed by their position in :attr:`edges`; that index is the
    ``EdgeRef`` used everywhere else in the package.
    """

    __slots__ = ("_n", "_edges")

    def __init__(self, n: int, edges: Iterable[Edge] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        checked = []
        for u, v, w in edges:
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (w > 0 and math.isfinite(w)):
                raise ValueError(f"edge ({u}, {v}) has non-positive or non-finite weight {w!r}")
            checked.append((u, v, w))
        self._n = n
        self._edges = tuple(checked)

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    def __iter__(self) -> Iterator[Edge]:
        return iter(self._edges)

    def __len__(self) -> int:
        return len(self._edges)

    def __getitem__(self, index: int) -> Edge:
        return self._edges[index]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._n, self._edges))

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self._n}, m={self.m})"

    def total_weight(self, refs: Iterable[int] | None = None) -> float:
        if refs is None:
            return math.fsum(w for _, _, w in self._edges)
        return math.fsum(self._edges[i][2] for i in refs)

    def adjacency(self, refs: Iterable[int] | None = None) -> list[list[tuple[int, float, int]]]:
        """Per-vertex lists of ``(neighbor, weight, edge_ref)``."""
        adj: list[list[tuple[int, float, int]]] = [[] for _ in range(self._n)]
        indices = range(len(self._edges)) if refs is None else refs
        for i in indices:
            u, v, w = self._edges[i]
            adj[u].append((v, w, i))
            adj[v].append((u, w, i))
        return adj

    def subgraph(self, refs: Iterable[int]) -> "WeightedGraph":
        return WeightedGraph(self._n, (self._edges[i] for i in sorted(set(refs))))

    def simplify(self) -> tuple["WeightedGraph", list[int]]:
        """Keep the lightest edge of every parallel class (ties: lowest index).

        Returns the simple graph and, for each of its edges, the index of the
        original edge it came from. Edge order follows the original order.
        """
        best: dict[tuple[int, int], int] = {}
        for i, (u, v, w) in enumerate(self._edges):
            key = (u, v) if u < v else (v, u)
            j = best.get(key)
            if j is None or w < self._edges[j][2]:
                best[key] = i
        kept = sorted(best.values())
        return WeightedGraph(self._n, (self._edges[i] for i in kept)), kept

    def is_connected(self) -> bool:
        return len(components(self)) <= 1


def components(g: WeightedGraph) -> list[list[int]]:
    """Connected components by iterative DFS, each sorted, ordered by smallest vertex."""
    adj = g.adjacency()
    seen = [False] * g.n
    out = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        stack, comp = [s], []
        while stack:
            x = stack.pop()
            comp.append(x)
            for y, _, _ in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
        out.append(sorted(comp))
    return out


# --- edge-list text format -------------------------------------------------


def parse_graph(text: str | bytes) -> WeightedGraph:
    """Parse the ``p <n> <m>`` / ``e <u> <v> <w>`` edge-list format."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    n = m = None
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise GraphFormatError("duplicate header", lineno)
            if len(parts) != 3:
                raise GraphFormatError("header must be 'p <n> <m>'", lineno)
            try:
                n, m = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphFormatError("header counts must be integers", lineno) from None
            if n < 0 or m < 0:
                raise GraphFormatError("header counts must be non-negative", lineno)
        elif tag == "e":
            if n is None:
                raise GraphFormatError("edge before header", lineno)
            if len(parts) != 4:
                raise GraphFormatError("edge must be 'e <u> <v> <w>'", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
                w = float(parts[3])
            except ValueError:
                raise GraphFormatError("cannot parse edge fields", lineno) from None
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"vertex id out of range 0..{n - 1}", lineno)
            if u == v:
                raise GraphFormatError(f"self-loop at vertex {u}", lineno)
            if not (w > 0 and math.isfinite(w)):
                raise GraphFormatError(f"non-positive or non-finite weight {parts[3]}", lineno)
            edges.append((u, v, w))
        else:
            raise GraphFormatError(f"unknown line tag {tag!r}", lineno)
    if n is None:
        raise GraphFormatError("missing 'p <n> <m>' header")
    if len(edges) != m:
        raise GraphFormatError(f"header declares {m} edges but {len(edges)} were given")
    return WeightedGraph(n, edges)


def serialize_graph(g: WeightedGraph) -> str:
    # repr() of a float is the shortest string that round-trips exactly.
    lines = [f"p {g.n} {g.m}"]
    lines.extend(f"e {u} {v} {w!r}" for u, v, w in g.edges)
    return "\n".join(lines) + "\n"


def read_graph(path) -> WeightedGraph:
    with open(path, "rb") as fh:
        return parse_graph(fh.read())


def write_graph(g: WeightedGraph, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(serialize_graph(g))


# --- generators ------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorSpec:
    """A generator model plus its parameters.

    Text form (CLI ``--gen``): ``uniform:n=100,m=400,wmin=1,wmax=10``,
    ``geometric:n=200,radius=0.15`` or ``grid:rows=10,cols=10,jitter=0.2``.
    """

    model: str
    params: dict = field(default_factory=dict)

    _DEFAULTS = {
        "uniform": {"n": None, "m": None, "wmin": 1.0, "wmax": 100.0},
        "geometric": {"n": None, "radius": None},
        "grid": {"rows": None, "cols": None, "jitter": 0.0},
    }
    _INTS = {"n", "m", "rows", "cols"}

    @classmethod
    def parse(cls, text: str) -> "GeneratorSpec":
        model, _, rest = text.partition(":")
        model = model.strip()
        if model not in cls._DEFAULTS:
            raise GeneratorError(f"unknown generator model {model!r}")
        params = dict(cls._DEFAULTS[model])
        for item in filter(None, (s.strip() for s in rest.split(","))):
            key, eq, value = item.partition("=")
            key = key.strip()
            if not eq or key not in params:
                raise GeneratorError(f"bad parameter {item!r} for model {model!r}")
            try:
                params[key] = int(value) if key in cls._INTS else float(value)
            except ValueError:
                raise GeneratorError(f"bad value for {key!r}: {value!r}") from None
        missing = [k for k, v in params.items() if v is None]
        if missing:
            raise GeneratorError(f"model {model!r} requires {', '.join(missing)}")
        return cls(model, params)

    def __str__(self) -> str:
        body = ",".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.model}:{body}"


def generate(spec: GeneratorSpec | str, seed: int) -> WeightedGraph:
    """Deterministic connected graph for ``(spec, seed)``."""
    if isinstance(spec, str):
        spec = GeneratorSpec.parse(spec)
    rng = random.Random(seed)
    p = spec.params
    if spec.model == "uniform":
        return uniform_random(p["n"], p["m"], p["wmin"], p["wmax"], rng)
    if spec.model == "geometric":
        return geometric_random(p["n"], p["radius"], rng)
    if spec.model == "grid":
        return grid(p["rows"], p["cols"], p["jitter"], rng)
    raise GeneratorError(f"unknown generator model {spec.model!r}")


def _random_tree(n: int, rng: random.Random) -> list[tuple[int, int]]:
    """Random spanning tree: each vertex of a shuffled order attaches to an earlier one."""
    order = list(range(n))
    rng.shuffle(order)
    pairs = []
    for i in range(1, n):
        a, b = order[i], order[rng.randrange(i)]
        pairs.append((a, b) if a < b else (b, a))
    return pairs


def uniform_random(n: int, m: int, wmin: float, wmax: float, rng: random.Random) -> WeightedGraph:
    if n < 1:
        raise GeneratorError("uniform: n must be >= 1")
    if m < n - 1:
        raise GeneratorError(f"uniform: m={m} < n-1={n - 1}; cannot be connected")
    if m > n * (n - 1) // 2:
        raise GeneratorError(f"uniform: m={m} exceeds the {n * (n - 1) // 2} possible simple edges")
    if not (0 < wmin <= wmax and math.isfinite(wmax)):
        raise GeneratorError("uniform: need 0 < wmin <= wmax")
    pairs = _random_tree(n, rng)
    used = set(pairs)
    while len(pairs) < m:
        a, b = rng.randrange(n), rng.randrange(n)
        if a == b:
            continue
        key = (a, b) if a < b else (b, a)
        if key in used:
            continue
        used.add(key)
        pairs.append(key)
    return WeightedGraph(n, ((a, b, rng.uniform(wmin, wmax)) for a, b in pairs))


def geometric_random(n: int, radius: float, rng: random.Random) -> WeightedGraph:
    """Unit-square random geometric graph, Euclidean weights, plus a random tree."""
    from scipy.spatial import cKDTree

    if n < 1:
        raise GeneratorError("geometric: n must be >= 1")
    if not radius > 0:
        raise GeneratorError("geometric: radius must be positive")
    pts = [(rng.random(), rng.random()) for _ in range(n)]

    def dist(a: int, b: int) -> float:
        # coincident points would give weight 0
        return max(math.dist(pts[a], pts[b]), 1e-12)

    pairs = _random_tree(n, rng)
    used = set(pairs)
    near = sorted(cKDTree(pts).query_pairs(radius)) if n > 1 else []
    for a, b in near:
        if (a, b) not in used:
            used.add((a, b))
            pairs.append((a, b))
    return WeightedGraph(n, ((a, b, dist(a, b)) for a, b in pairs))


def grid(rows: int, cols: int, jitter: float, rng: random.Random) -> WeightedGraph:
    """4-neighbour grid; weights are ``1 + jitter * U[0, 1)``."""
    if rows < 1 or cols < 1:
        raise GeneratorError("grid: rows and cols must be >= 1")
    if jitter < 0:
        raise GeneratorError("grid: jitter must be >= 0")
    edges = []
    for r in range(rows):
        for c in range(cols):
            x = r * cols + c
            if c + 1 < cols:
                edges.append((x, x + 1, 1.0 + jitter * rng.random()))
            if r + 1 < rows:
                edges.append((x, x + cols, 1.0 + jitter * rng.random()))
    return WeightedGraph(rows * cols, edges)


def edges_of(g: WeightedGraph, refs: Sequence[int]) -> list[Edge]:
    return [g.edges[i] for i in refs]

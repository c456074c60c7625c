"""Light, sparse spanners of weighted graphs built on an MST backbone."""

from .blackbox import greedy_spanner, unweighted_spanner, weighted_spanner
from .graph import GeneratorSpec, WeightedGraph, generate, parse_graph, serialize_graph
from .lightsp import ParameterError, SpannerResult, construct, stretch_bound
from .mst import Backbone, UnionFind, build_backbone, build_mst
from .streamsim import run_stream
from .verify import measure, verify_hop_stretch, verify_stretch

__version__ = "0.1.0"

__all__ = [
    "Backbone", "GeneratorSpec", "ParameterError", "SpannerResult", "UnionFind", "WeightedGraph",
    "build_backbone", "build_mst", "construct", "generate", "greedy_spanner", "measure",
    "parse_graph", "run_stream", "serialize_graph", "stretch_bound", "unweighted_spanner",
    "verify_hop_stretch", "verify_stretch", "weighted_spanner",
]

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lightspan.graph import (
    GeneratorError,
    GeneratorSpec,
    GraphFormatError,
    WeightedGraph,
    components,
    generate,
    parse_graph,
    serialize_graph,
)

from oracles import random_connected_edges


def test_parse_simple():
    g = parse_graph("p 3 2\ne 0 1 1.5\ne 1 2 2.0")
    assert g.n == 3
    assert g.edges == ((0, 1, 1.5), (1, 2, 2.0))


def test_parse_accepts_bytes_and_comments():
    g = parse_graph(b"# header comment\np 2 1\n# edge follows\ne 1 0 3\n")
    assert g.edges == ((1, 0, 3.0),)


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("p 2 1\ne 0 0 1.0", 2, "self-loop"),
        ("p 2 1\ne 0 2 1.0", 2, "out of range"),
        ("p 2 1\ne 0 1 0", 2, "non-positive"),
        ("p 2 1\ne 0 1 -1.5", 2, "non-positive"),
        ("p 2 1\ne 0 1 inf", 2, "non-finite"),
        ("p two 1\n", 1, "integers"),
        ("e 0 1 1.0\np 2 1", 1, "before header"),
        ("p 2 1\ne 0 1", 2, "'e <u> <v> <w>'"),
        ("p 2 1\nx 0 1 1.0", 2, "unknown line tag"),
    ],
)
def test_parse_errors_name_the_line(text, line, fragment):
    with pytest.raises(GraphFormatError) as info:
        parse_graph(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)
    assert fragment in str(info.value)


def test_parse_edge_count_mismatch():
    with pytest.raises(GraphFormatError, match="declares 2 edges"):
        parse_graph("p 3 2\ne 0 1 1.0\n")


def test_parse_missing_header():
    with pytest.raises(GraphFormatError, match="missing"):
        parse_graph("# nothing here\n")


def test_serialize_empty():
    assert serialize_graph(WeightedGraph(0)).strip() == "p 0 0"


def test_serialize_single_edge():
    assert serialize_graph(WeightedGraph(2, [(0, 1, 1.0)])) == "p 2 1\ne 0 1 1.0\n"


def test_serialize_keeps_full_precision():
    w = 0.1 + 0.2
    g = WeightedGraph(2, [(0, 1, w)])
    assert parse_graph(serialize_graph(g)).edges[0][2] == w


def test_round_trip_random_graphs():
    rng = random.Random(2024)
    for _ in range(100):
        n = rng.randint(2, 40)
        edges = random_connected_edges(n, rng.randint(0, 60), rng, 1e-6, 1e6, parallel=True)
        g = WeightedGraph(n, edges)
        assert parse_graph(serialize_graph(g)) == g


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_round_trip_property(data):
    n = data.draw(st.integers(min_value=2, max_value=30))
    weights = st.floats(min_value=1e-300, max_value=1e300, allow_nan=False, allow_infinity=False)
    edge = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), weights).filter(lambda e: e[0] != e[1])
    edges = data.draw(st.lists(edge, max_size=50))
    g = WeightedGraph(n, edges)
    assert parse_graph(serialize_graph(g)) == g


def test_weighted_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        WeightedGraph(2, [(0, 0, 1.0)])
    with pytest.raises(ValueError):
        WeightedGraph(2, [(0, 1, 0.0)])
    with pytest.raises(ValueError):
        WeightedGraph(2, [(0, 2, 1.0)])


def test_simplify_keeps_lightest_parallel_edge():
    g = WeightedGraph(3, [(0, 1, 5.0), (1, 2, 1.0), (1, 0, 2.0), (0, 1, 2.0)])
    simple, origin = g.simplify()
    assert origin == [1, 2]
    assert simple.edges == ((1, 2, 1.0), (1, 0, 2.0))


def test_grid_without_jitter():
    g = generate("grid:rows=2,cols=2,jitter=0", seed=5)
    assert g.n == 4 and g.m == 4
    assert all(w == 1.0 for _, _, w in g.edges)


def test_grid_jitter_positive():
    g = generate("grid:rows=5,cols=7,jitter=0.9", seed=1)
    assert g.m == 5 * 6 + 4 * 7
    assert all(1.0 <= w < 1.9 for _, _, w in g.edges)


def test_uniform_infeasible():
    with pytest.raises(GeneratorError, match="m=50 < n-1=99"):
        generate("uniform:n=100,m=50", seed=0)


@pytest.mark.parametrize(
    "spec",
    ["uniform:n=60,m=150,wmin=0.5,wmax=2", "geometric:n=80,radius=0.2", "grid:rows=6,cols=9,jitter=0.3"],
)
def test_generators_deterministic_and_connected(spec):
    a = generate(spec, seed=11)
    b = generate(spec, seed=11)
    assert serialize_graph(a) == serialize_graph(b)
    assert len(components(a)) == 1
    assert all(w > 0 for _, _, w in a.edges)
    assert serialize_graph(generate(spec, seed=12)) != serialize_graph(a)


def test_uniform_exact_edge_count_and_simple():
    g = generate("uniform:n=50,m=300", seed=3)
    assert g.m == 300
    pairs = {(min(u, v), max(u, v)) for u, v, _ in g.edges}
    assert len(pairs) == 300


def test_geometric_tiny_radius_still_connected():
    g = generate("geometric:n=40,radius=0.001", seed=9)
    assert len(components(g)) == 1


@pytest.mark.parametrize(
    "text",
    ["nope:n=3", "uniform:n=3", "grid:rows=2,cols=x", "uniform:n=3,m=2,bogus=1", "geometric:n=5,radius"],
)
def test_generator_spec_errors(text):
    with pytest.raises(GeneratorError):
        GeneratorSpec.parse(text)


def test_generator_spec_text_round_trip():
    spec = GeneratorSpec.parse("uniform:n=10,m=20,wmin=2,wmax=3")
    assert GeneratorSpec.parse(str(spec)) == spec

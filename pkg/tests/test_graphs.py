import pytest

from segrec.geom import Segment, UnitSegment
from segrec.graphs import (
    Kind,
    LabeledGraph,
    VertexLabel,
    graphs_equal,
    intersection_graph,
    is_induced_cycle,
    parse_label,
)
from segrec.utilities import ParseError

V = VertexLabel


@pytest.mark.parametrize(
    "label",
    [
        V.pseudoline(1),
        V.twin(12),
        V.probe(2, "above", 1),
        V.probe(3, "below", 4),
        V.connector_left(V.pseudoline(3)),
        V.connector_right(V.twin(2)),
        V.connector_left(V.probe(1, "below", 2)),
        V.cycle(17),
        V.chain(1, 33),
        V.top(4),
        V.bottom(2),
        V.named("a"),
    ],
)
def test_label_roundtrip(label):
    assert parse_label(str(label)) == label


def test_label_strings():
    assert str(V.probe(2, "above", 1)) == "probe:2:above:1"
    assert str(V.connector_left(V.probe(2, "above", 1))) == "cl:probe:2:above:1"
    assert str(V.chain(3, 4)) == "chain:3:4"
    assert parse_label("x7").kind is Kind.NAMED


@pytest.mark.parametrize("text", ["", "pl:0", "pl:x", "probe:1:left:2", "chain:1", "cl:cyc:3", "top:-1"])
def test_parse_label_exceptions(text):
    with pytest.raises(ParseError):
        parse_label(text)


def test_label_order():
    labels = [V.cycle(1), V.probe(1, "below", 1), V.pseudoline(2), V.pseudoline(1), V.probe(1, "above", 2)]
    assert sorted(labels) == [
        V.pseudoline(1),
        V.pseudoline(2),
        V.probe(1, "below", 1),
        V.probe(1, "above", 2),
        V.cycle(1),
    ]


def test_labeled_graph():
    a, b, c = V.named("a"), V.named("b"), V.named("c")
    g = LabeledGraph([a, b, c], [(a, b)])
    assert len(g) == 3
    assert g.has_edge(b, a)
    assert g.degree(c) == 0
    assert g.neighbors(a) == {b}
    assert g.sorted_edges() == [(a, b)]
    h = g.copy()
    h.add_edge(b, c)
    assert g.number_of_edges() == 1
    assert h != g
    h.remove_edge(b, c)
    assert h == g
    with pytest.raises(ValueError):
        g.add_edge(a, a)
    with pytest.raises(ValueError):
        g.add_edge(a, V.named("missing"))


def test_intersection_graph_and_diff():
    a, b, c = V.named("a"), V.named("b"), V.named("c")
    objects = {
        a: UnitSegment((0, 0), (1, 0)),
        b: UnitSegment(("1/2", "-1/2"), (0, 1)),
        c: Segment((5, 5), (6, 6)),
    }
    g = intersection_graph(objects)
    assert g.sorted_edges() == [(a, b)]
    ok, diff = graphs_equal(LabeledGraph([a, b, c], [(a, b)]), g)
    assert ok
    assert diff.report() == ""

    expected = LabeledGraph([a, b, c], [(a, c)])
    ok, diff = graphs_equal(expected, g)
    assert not ok
    assert diff.missing_edges == [(a, c)]
    assert diff.extra_edges == [(a, b)]
    assert "missing edge a -- c" in diff.report()
    assert diff.to_dict()["extraEdges"] == [["a", "b"]]


def test_graphs_equal_vertices():
    a, b = V.named("a"), V.named("b")
    ok, diff = graphs_equal(LabeledGraph([a, b]), LabeledGraph([a]))
    assert not ok
    assert diff.missing_vertices == [b]
    assert diff.report() == "missing vertex b"


def test_is_induced_cycle():
    cycle = [V.cycle(j) for j in range(1, 5)]
    g = LabeledGraph(cycle, list(zip(cycle, cycle[1:] + cycle[:1])))
    assert is_induced_cycle(g, cycle)
    assert is_induced_cycle(g, list(reversed(cycle)))
    assert not is_induced_cycle(g, cycle[:3])
    g.add_edge(cycle[0], cycle[2])
    assert not is_induced_cycle(g, cycle)


def test_intersection_graph_crossing_and_disjoint():
    a, b, c, d = (V.named(name) for name in "abcd")
    objects = {
        a: Segment((0, 0), (2, 2)),
        b: Segment((0, 2), (2, 0)),
        c: Segment((10, 0), (11, 0)),
        d: Segment((10, 1), (11, 1)),
    }
    g = intersection_graph(objects)
    assert g.vertices == frozenset(objects)
    assert g.sorted_edges() == [(a, b)]


@pytest.mark.parametrize("name", ["pl", "tw", "probe", "cl", "cr", "cyc", "chain", "top", "bot", "pl:1", "cl:x"])
def test_named_label_rejects_reserved_prefix(name):
    with pytest.raises(ValueError):
        V.named(name)


@pytest.mark.parametrize("name", ["v", "plx", "c1", "top-left", "v:3"])
def test_named_label_roundtrip(name):
    label = V.named(name)
    assert parse_label(str(label)) == label

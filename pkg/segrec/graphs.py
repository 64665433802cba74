"""
Labelled graphs, intersection graphs of geometric objects, and exact
label-respecting comparison.

Vertex labels have a canonical string form::

    pl:<i>                      pseudoline i
    tw:<i>                      twin of pseudoline i
    probe:<i>:<above|below>:<t> probe of pseudoline (pair) i at depth t
    cl:<host>, cr:<host>        left / right connector of <host>
    cyc:<j>                     cycle arc j
    chain:<i>:<j>               arc j of frame chain i
    top:<j>, bot:<j>            arc j of the top / bottom frame chain

Any other string is a plain named vertex, used for hand-written graphs.
"""

import enum
import itertools
import re
from dataclasses import dataclass, field
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
)

import networkx as nx

from segrec.geom import GeometricObject, object_points, objects_intersect
from segrec.utilities import ParseError, get_bounds


class Kind(enum.Enum):
    PSEUDOLINE = "pl"
    TWIN = "tw"
    PROBE = "probe"
    CONNECTOR_LEFT = "cl"
    CONNECTOR_RIGHT = "cr"
    CYCLE = "cyc"
    CHAIN = "chain"
    TOP = "top"
    BOTTOM = "bot"
    NAMED = "v"


_KIND_RANK = {kind: rank for rank, kind in enumerate(Kind)}
_SIDES = ("above", "below")
_RESERVED = frozenset(kind.value for kind in Kind if kind is not Kind.NAMED)


@dataclass(frozen=True)
class VertexLabel:
    kind: Kind
    index: Tuple[int, ...] = ()
    side: Optional[str] = None
    host: Optional["VertexLabel"] = None
    name: Optional[str] = None

    @classmethod
    def pseudoline(cls, i: int) -> "VertexLabel":
        return cls(Kind.PSEUDOLINE, (i,))

    @classmethod
    def twin(cls, i: int) -> "VertexLabel":
        return cls(Kind.TWIN, (i,))

    @classmethod
    def probe(cls, i: int, side: str, depth: int) -> "VertexLabel":
        if side not in _SIDES:
            raise ValueError("Probe side must be one of {}, got {!r}.".format(_SIDES, side))
        return cls(Kind.PROBE, (i, depth), side=side)

    @classmethod
    def connector_left(cls, host: "VertexLabel") -> "VertexLabel":
        return cls(Kind.CONNECTOR_LEFT, host=host)

    @classmethod
    def connector_right(cls, host: "VertexLabel") -> "VertexLabel":
        return cls(Kind.CONNECTOR_RIGHT, host=host)

    @classmethod
    def cycle(cls, j: int) -> "VertexLabel":
        return cls(Kind.CYCLE, (j,))

    @classmethod
    def chain(cls, i: int, j: int) -> "VertexLabel":
        return cls(Kind.CHAIN, (i, j))

    @classmethod
    def top(cls, j: int) -> "VertexLabel":
        return cls(Kind.TOP, (j,))

    @classmethod
    def bottom(cls, j: int) -> "VertexLabel":
        return cls(Kind.BOTTOM, (j,))

    @classmethod
    def named(cls, name: str) -> "VertexLabel":
        if not isinstance(name, str) or not name:
            raise ValueError("Vertex name must be a non-empty string, got {!r}.".format(name))
        prefix = name.partition(":")[0]
        if prefix in _RESERVED:
            raise ValueError(
                "Vertex name {!r} starts with the reserved prefix {!r}.".format(name, prefix)
            )
        return cls(Kind.NAMED, name=name)

    @property
    def depth(self) -> int:
        return self.index[1]

    def sort_key(self) -> tuple:
        return (
            _KIND_RANK[self.kind],
            self.index,
            _SIDES.index(self.side) if self.side else -1,
            self.host.sort_key() if self.host else (),
            self.name or "",
        )

    def __lt__(self, other: "VertexLabel") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        if self.kind is Kind.NAMED:
            return str(self.name)
        if self.kind in (Kind.CONNECTOR_LEFT, Kind.CONNECTOR_RIGHT):
            return "{}:{}".format(self.kind.value, self.host)
        if self.kind is Kind.PROBE:
            i, depth = self.index
            return "probe:{}:{}:{}".format(i, self.side, depth)
        return ":".join([self.kind.value] + [str(i) for i in self.index])


_INT = r"([1-9]\d*)"
_PATTERNS = {
    Kind.PSEUDOLINE: re.compile(r"pl:" + _INT),
    Kind.TWIN: re.compile(r"tw:" + _INT),
    Kind.PROBE: re.compile(r"probe:" + _INT + r":(above|below):" + _INT),
    Kind.CYCLE: re.compile(r"cyc:" + _INT),
    Kind.CHAIN: re.compile(r"chain:" + _INT + ":" + _INT),
    Kind.TOP: re.compile(r"top:" + _INT),
    Kind.BOTTOM: re.compile(r"bot:" + _INT),
}


def parse_label(text: str) -> VertexLabel:
    """Inverse of ``str(VertexLabel)``."""
    if not isinstance(text, str) or not text:
        raise ParseError("Vertex label must be a non-empty string, got {!r}.".format(text))
    prefix, _, rest = text.partition(":")
    if prefix in ("cl", "cr"):
        host = parse_label(rest)
        if host.kind not in (Kind.PSEUDOLINE, Kind.TWIN, Kind.PROBE):
            raise ParseError("Connector host must be a pseudoline, twin or probe, got {!r}.".format(rest))
        kind = Kind.CONNECTOR_LEFT if prefix == "cl" else Kind.CONNECTOR_RIGHT
        return VertexLabel(kind, host=host)
    kind = next((k for k in _PATTERNS if k.value == prefix), None)
    if kind is None:
        return VertexLabel.named(text)
    match = _PATTERNS[kind].fullmatch(text)
    if match is None:
        raise ParseError("Malformed {} label {!r}.".format(kind.name.lower(), text))
    if kind is Kind.PROBE:
        return VertexLabel.probe(int(match.group(1)), match.group(2), int(match.group(3)))
    return VertexLabel(kind, tuple(int(g) for g in match.groups()))


Edge = FrozenSet[VertexLabel]


class LabeledGraph:
    """A simple undirected graph on :class:`VertexLabel` vertices.

    Parameters
    ----------
    vertices: iterable of VertexLabel
    edges: iterable of label pairs
        Both endpoints must be among ``vertices``; loops are rejected.
    """

    def __init__(
        self,
        vertices: Iterable[VertexLabel] = (),
        edges: Iterable[Sequence[VertexLabel]] = (),
    ):
        self._graph = nx.Graph()
        for v in vertices:
            self.add_vertex(v)
        for u, v in edges:
            self.add_edge(u, v)

    def add_vertex(self, v: VertexLabel) -> None:
        self._graph.add_node(v)

    def add_edge(self, u: VertexLabel, v: VertexLabel) -> None:
        if u == v:
            raise ValueError("Loops are not allowed, got an edge {!r} -- {!r}.".format(str(u), str(v)))
        for w in (u, v):
            if w not in self._graph:
                raise ValueError("Edge endpoint {!r} is not a vertex of the graph.".format(str(w)))
        self._graph.add_edge(u, v)

    def remove_edge(self, u: VertexLabel, v: VertexLabel) -> None:
        self._graph.remove_edge(u, v)

    @property
    def vertices(self) -> FrozenSet[VertexLabel]:
        return frozenset(self._graph.nodes)

    @property
    def edges(self) -> FrozenSet[Edge]:
        return frozenset(frozenset(e) for e in self._graph.edges)

    @property
    def nx(self) -> nx.Graph:
        """A read-only networkx view of the graph."""
        return nx.graphviews.subgraph_view(self._graph)

    def has_edge(self, u: VertexLabel, v: VertexLabel) -> bool:
        return self._graph.has_edge(u, v)

    def neighbors(self, v: VertexLabel) -> FrozenSet[VertexLabel]:
        return frozenset(self._graph.neighbors(v))

    def degree(self, v: VertexLabel) -> int:
        return self._graph.degree(v)

    def sorted_vertices(self) -> List[VertexLabel]:
        return sorted(self._graph.nodes)

    def sorted_edges(self) -> List[Tuple[VertexLabel, VertexLabel]]:
        return sorted(tuple(sorted(e)) for e in self._graph.edges)

    def number_of_edges(self) -> int:
        return self._graph.number_of_edges()

    def copy(self) -> "LabeledGraph":
        return LabeledGraph(self._graph.nodes, self._graph.edges)

    def __len__(self) -> int:
        return self._graph.number_of_nodes()

    def __contains__(self, v: object) -> bool:
        return v in self._graph

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __repr__(self) -> str:
        return "LabeledGraph(|V|={}, |E|={})".format(len(self), self.number_of_edges())


def intersection_graph(objects: Mapping[VertexLabel, GeometricObject]) -> LabeledGraph:
    """The intersection graph of labelled objects, decided exactly."""
    labels = sorted(objects)
    boxes = {
        label: get_bounds(p.to_tuple() for p in object_points(objects[label]))
        for label in labels
    }
    graph = LabeledGraph(labels)
    for u, v in itertools.combinations(labels, 2):
        (ux0, uy0), (ux1, uy1) = boxes[u]
        (vx0, vy0), (vx1, vy1) = boxes[v]
        if ux1 < vx0 or vx1 < ux0 or uy1 < vy0 or vy1 < uy0:
            continue
        if objects_intersect(objects[u], objects[v]):
            graph.add_edge(u, v)
    return graph


@dataclass
class GraphDiff:
    """Symmetric difference between an expected and an actual graph."""

    missing_vertices: List[VertexLabel] = field(default_factory=list)
    extra_vertices: List[VertexLabel] = field(default_factory=list)
    missing_edges: List[Tuple[VertexLabel, VertexLabel]] = field(default_factory=list)
    extra_edges: List[Tuple[VertexLabel, VertexLabel]] = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return not (
            self.missing_vertices
            or self.extra_vertices
            or self.missing_edges
            or self.extra_edges
        )

    def report(self) -> str:
        lines = ["missing vertex {}".format(v) for v in self.missing_vertices]
        lines += ["extra vertex {}".format(v) for v in self.extra_vertices]
        lines += ["missing edge {} -- {}".format(u, v) for u, v in self.missing_edges]
        lines += ["extra edge {} -- {}".format(u, v) for u, v in self.extra_edges]
        return "\n".join(lines)

    def to_dict(self) -> Dict[str, list]:
        return {
            "missingVertices": [str(v) for v in self.missing_vertices],
            "extraVertices": [str(v) for v in self.extra_vertices],
            "missingEdges": [[str(u), str(v)] for u, v in self.missing_edges],
            "extraEdges": [[str(u), str(v)] for u, v in self.extra_edges],
        }


def graphs_equal(expected: LabeledGraph, actual: LabeledGraph) -> Tuple[bool, GraphDiff]:
    """Label-respecting equality of two graphs plus the difference report."""

    def pairs(edges: Iterable[Edge]) -> List[Tuple[VertexLabel, VertexLabel]]:
        return sorted(tuple(sorted(e)) for e in edges)

    diff = GraphDiff(
        missing_vertices=sorted(expected.vertices - actual.vertices),
        extra_vertices=sorted(actual.vertices - expected.vertices),
        missing_edges=pairs(expected.edges - actual.edges),
        extra_edges=pairs(actual.edges - expected.edges),
    )
    return diff.empty, diff


def is_induced_cycle(g: LabeledGraph, cycle: Sequence[VertexLabel]) -> bool:
    """Whether ``cycle`` in this order is an induced cycle of ``g``."""
    if len(cycle) < 3 or len(set(cycle)) != len(cycle):
        return False
    if any(v not in g for v in cycle):
        return False
    members = set(cycle)
    m = len(cycle)
    for pos, v in enumerate(cycle):
        expected = {cycle[pos - 1], cycle[(pos + 1) % m]}
        if g.neighbors(v) & members != expected:
            return False
    return True

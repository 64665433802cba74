"""
Structural checks on induced cycles: connectors, intersectors, the graph
and geometric orders of intersectors, trace partitions and cell
containment.
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import (
    TYPE_CHECKING,
    Any,
    Dict,
    Hashable,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
)

import networkx as nx

from segrec.geom import (
    GeometricObject,
    Point,
    Segment,
    intersection_points,
    on_segment,
    orientation,
    segments_intersect,
)
from segrec.graphs import LabeledGraph, VertexLabel

if TYPE_CHECKING:  # pragma: no cover
    from segrec.reduction import ReductionArtifact

logger = logging.getLogger(__name__)

# Smallest number of distinct symbols for which the trace partition applies.
MIN_TRACE_SYMBOLS = 5


class DegenerateRealization(ValueError):
    """Raised when crossings along a realized cycle cannot be ordered."""


class SymbolOutOfRange(ValueError):
    """Raised when a trace mentions a symbol outside 1..n."""


class CyclicSequence:
    """A sequence read up to rotation and reflection."""

    def __init__(self, items: Iterable[Hashable] = ()):
        self.items = tuple(items)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __repr__(self) -> str:
        return "CyclicSequence({!r})".format(list(self.items))

    def variants(self) -> List[Tuple[Hashable, ...]]:
        """All rotations of the sequence and of its reversal."""
        out = []
        for seq in (self.items, self.items[::-1]):
            for shift in range(max(len(seq), 1)):
                out.append(seq[shift:] + seq[:shift])
        return out

    def equivalent(self, other: "CyclicSequence") -> bool:
        if len(self) != len(other):
            return False
        return other.items in set(self.variants())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CyclicSequence):
            return NotImplemented
        return self.equivalent(other)

    def __hash__(self) -> int:
        return hash(frozenset(self.variants()))


def _induces_cycle(g: LabeledGraph, cycle: Iterable[VertexLabel]) -> bool:
    members = set(cycle)
    if len(members) < 3 or any(v not in g for v in members):
        return False
    sub = g.nx.subgraph(members)
    return all(d == 2 for _, d in sub.degree()) and nx.is_connected(sub)


def _neighbors_in(g: LabeledGraph, v: VertexLabel, members: set) -> set:
    return set(g.neighbors(v)) & members


def validate_connectors(
    g: LabeledGraph, cycle: Iterable[VertexLabel], connectors: Iterable[VertexLabel]
) -> Tuple[bool, List[str]]:
    """Check that ``connectors`` is the connector set of the induced cycle."""
    cycle_set = set(cycle)
    d_set = set(connectors)
    violations = []
    if not _induces_cycle(g, cycle_set):
        violations.append("the cycle vertices do not induce a cycle")
        return False, violations
    rest = g.vertices - cycle_set
    if rest and not nx.is_connected(g.nx.subgraph(rest)):
        violations.append("the graph without the cycle is not connected")
    neighborhood = {u for c in cycle_set for u in g.neighbors(c)} - cycle_set
    for v in sorted(neighborhood - d_set):
        violations.append("{} is a neighbor of the cycle but not a connector".format(v))
    for v in sorted(d_set - neighborhood):
        violations.append("{} is a connector but not a neighbor of the cycle".format(v))
    for u, v in itertools.combinations(sorted(d_set), 2):
        if g.has_edge(u, v):
            violations.append("connectors {} and {} are adjacent".format(u, v))
    remaining = g.vertices - d_set
    components = [set(c) for c in nx.connected_components(g.nx.subgraph(remaining))]
    inner = remaining - cycle_set
    expected = [cycle_set] + ([inner] if inner else [])
    if sorted(map(sorted, components)) != sorted(map(sorted, expected)):
        violations.append(
            "removing the connectors leaves {} components instead of the cycle "
            "and the enclosed part".format(len(components))
        )
    anchors: Dict[VertexLabel, VertexLabel] = {}
    for d in sorted(d_set):
        hits = _neighbors_in(g, d, cycle_set)
        if len(hits) != 1:
            violations.append("connector {} has {} cycle neighbors".format(d, len(hits)))
            continue
        anchors[d] = hits.pop()
    for (d, c), (e, c2) in itertools.combinations(sorted(anchors.items()), 2):
        if c == c2:
            violations.append("connectors {} and {} share the cycle neighbor {}".format(d, e, c))
        elif g.has_edge(c, c2):
            violations.append(
                "connectors {} and {} attach to adjacent cycle vertices {} and {}".format(d, e, c, c2)
            )
    return not violations, violations


def validate_intersectors(
    g: LabeledGraph, cycle: Iterable[VertexLabel], intersectors: Iterable[VertexLabel]
) -> Tuple[bool, List[str]]:
    """Check that ``intersectors`` is a set of intersectors of the induced cycle."""
    cycle_set = set(cycle)
    violations = []
    if not _induces_cycle(g, cycle_set):
        return False, ["the cycle vertices do not induce a cycle"]
    hits = {d: _neighbors_in(g, d, cycle_set) for d in sorted(set(intersectors))}
    for d, cs in hits.items():
        if d in cycle_set:
            violations.append("{} lies on the cycle".format(d))
        elif len(cs) not in (1, 2):
            violations.append("intersector {} has {} cycle neighbors".format(d, len(cs)))
        elif len(cs) == 2 and g.has_edge(*cs):
            violations.append("intersector {} meets the adjacent cycle vertices {}".format(d, sorted(map(str, cs))))
    for (d, cs), (e, cs2) in itertools.combinations(hits.items(), 2):
        for c in sorted(cs):
            for c2 in sorted(cs2):
                if c == c2 or g.has_edge(c, c2):
                    violations.append(
                        "intersectors {} and {} meet the cycle at {} and {}".format(d, e, c, c2)
                    )
    return not violations, violations


def graph_order(
    g: LabeledGraph, cycle: Sequence[VertexLabel], intersectors: Iterable[VertexLabel]
) -> CyclicSequence:
    """Pairs (c, d) with cd an edge, in the order of c along the cycle."""
    d_set = set(intersectors)
    pairs = []
    for c in cycle:
        for d in sorted(g.neighbors(c) & d_set):
            pairs.append((c, d))
    return CyclicSequence(pairs)


def _position(obj: GeometricObject, point: Point) -> Fraction:
    """Arc position of ``point`` on ``obj`` as segment index plus fraction."""
    for index, seg in enumerate(obj.segments()):
        if orientation(seg.p, seg.q, point) == 0 and on_segment(seg.p, seg.q, point):
            delta = seg.q - seg.p
            t = (point - seg.p).dot(delta) / delta.dot(delta)
            return index + t
    raise ValueError("{!r} does not lie on the object.".format(point))


def _meeting_points(a: GeometricObject, b: GeometricObject) -> List[Point]:
    points = set()
    for s in a.segments():
        for t in b.segments():
            found = intersection_points(s, t)
            if len(found) > 1:
                raise DegenerateRealization("Objects overlap collinearly.")
            points.update(found)
    return sorted(points)


@dataclass
class CoreCycleCurve:
    """Closed walk through the realized cycle between consecutive crossings.

    ``corners[i]`` is the crossing of cycle objects i and i + 1.
    """

    labels: List[VertexLabel]
    objects: List[GeometricObject]
    corners: List[Point]

    @classmethod
    def build(
        cls, cycle: Sequence[VertexLabel], objects: Mapping[VertexLabel, GeometricObject]
    ) -> "CoreCycleCurve":
        objs = [objects[c] for c in cycle]
        corners = []
        for i, c in enumerate(cycle):
            nxt = cycle[(i + 1) % len(cycle)]
            points = _meeting_points(objs[i], objs[(i + 1) % len(objs)])
            if len(points) != 1:
                raise DegenerateRealization(
                    "Consecutive cycle objects {} and {} meet in {} points.".format(c, nxt, len(points))
                )
            corners.append(points[0])
        return cls(list(cycle), objs, corners)

    def span(self, i: int) -> Tuple[Fraction, Fraction]:
        """Arc positions on object i of its incoming and outgoing corners."""
        return _position(self.objects[i], self.corners[i - 1]), _position(self.objects[i], self.corners[i])

    def polygon(self) -> List[Point]:
        """Vertices of the closed walk, one sub-arc per cycle object."""
        out: List[Point] = []
        for i, obj in enumerate(self.objects):
            start, end = self.span(i)
            pts = obj.segments()
            lo, hi = sorted((start, end))
            inner = [
                seg.p
                for index, seg in enumerate(pts)
                if index > 0 and lo < index < hi
            ]
            if start > end:
                inner.reverse()
            out.append(self.corners[i - 1])
            out.extend(inner)
        return out

    def walk_fraction(self, i: int, point: Point) -> Fraction:
        """Where ``point`` on object i falls between its two corners.

        Values below 0 or above 1 lie on the free end hanging past the
        incoming or outgoing corner.
        """
        start, end = self.span(i)
        pos = _position(self.objects[i], point)
        if start == end:
            return Fraction(0)
        return (pos - start) / (end - start)


def geometric_order(
    cycle: Sequence[VertexLabel],
    objects: Mapping[VertexLabel, GeometricObject],
    intersectors: Iterable[VertexLabel],
) -> CyclicSequence:
    """Pairs (c, d) in the order the intersectors cross the core cycle curve.

    A crossing on a free end of a cycle object is ordered at the corner it
    hangs from; two intersectors hanging from one corner cannot be ordered.
    """
    curve = CoreCycleCurve.build(cycle, objects)
    corners = set(curve.corners)
    hits: List[Tuple[int, Fraction, VertexLabel, VertexLabel]] = []
    hanging: Dict[int, set] = {}
    for d in sorted(intersectors):
        for i, c in enumerate(cycle):
            for point in _meeting_points(objects[d], curve.objects[i]):
                if point in corners:
                    raise DegenerateRealization(
                        "{} crosses the cycle exactly at a corner {!r}.".format(d, point)
                    )
                f = curve.walk_fraction(i, point)
                if f < 0 or f > 1:
                    corner = (i - 1) % len(cycle) if f < 0 else i
                    hanging.setdefault(corner, set()).add(d)
                    f = Fraction(0) if f < 0 else Fraction(1)
                hits.append((i, f, c, d))
    for corner, ds in sorted(hanging.items()):
        if len(ds) > 1:
            raise DegenerateRealization(
                "{} all cross free ends at the corner of {} and {}.".format(
                    ", ".join(str(d) for d in sorted(ds)),
                    cycle[corner],
                    cycle[(corner + 1) % len(cycle)],
                )
            )
    hits.sort(key=lambda hit: (hit[0], hit[1]))
    pairs = [(c, d) for _, _, c, d in hits]
    collapsed = [pair for pos, pair in enumerate(pairs) if pos == 0 or pair != pairs[pos - 1]]
    while len(collapsed) > 1 and collapsed[0] == collapsed[-1]:
        collapsed.pop()
    return CyclicSequence(collapsed)


def check_order_lemma(
    g: LabeledGraph,
    cycle: Sequence[VertexLabel],
    intersectors: Iterable[VertexLabel],
    objects: Mapping[VertexLabel, GeometricObject],
) -> bool:
    """Whether the graph order and the geometric order of the intersectors agree."""
    intersectors = list(intersectors)
    expected = graph_order(g, cycle, intersectors)
    actual = geometric_order(cycle, objects, intersectors)
    if not expected.equivalent(actual):
        logger.debug("order lemma: graph order %s, geometric order %s", expected, actual)
        return False
    return True


def _reflect_symbol(s: int, n: int) -> int:
    return (1 - s) % n + 1


def _splits(seq: Sequence[int], n: int) -> bool:
    """Whether ``seq`` splits into n nonempty blocks, block b over {b, b+1}."""

    def alphabet(b: int) -> Tuple[int, int]:
        return b, b % n + 1

    if not seq or seq[0] not in alphabet(1):
        return False
    states = {1}
    for s in seq[1:]:
        nxt = set()
        for b in states:
            if s in alphabet(b):
                nxt.add(b)
            if b < n and s in alphabet(b + 1):
                nxt.add(b + 1)
        if not nxt:
            return False
        states = nxt
    return n in states


def _check_symbols(trace: Sequence[int], n: int) -> List[int]:
    if n < 4:
        raise ValueError("Trace partitions need n >= 4, got n={!r}.".format(n))
    symbols = list(trace)
    bad = [s for s in symbols if not isinstance(s, int) or not 1 <= s <= n]
    if bad:
        raise SymbolOutOfRange("Symbol {!r} lies outside 1..{}.".format(bad[0], n))
    return symbols


def _candidates(symbols: List[int], n: int) -> Iterable[Tuple[int, ...]]:
    reflected = [_reflect_symbol(s, n) for s in reversed(symbols)]
    for seq in (symbols, reflected):
        for shift in range(len(seq)):
            yield tuple(seq[shift:] + seq[:shift])


def trace_partition_check(trace: Sequence[int], n: int) -> bool:
    """Whether some rotation or reflection of the cyclic ``trace`` splits into
    n nonempty blocks with block i over the symbols {i, i+1 mod n}."""
    symbols = _check_symbols(trace, n)
    if len(symbols) < n:
        return False
    return any(_splits(seq, n) for seq in _candidates(symbols, n))


def trace_partition_exhaustive(trace: Sequence[int], n: int) -> bool:
    """Same decision as :func:`trace_partition_check` by trying every cut."""
    symbols = _check_symbols(trace, n)
    if len(symbols) < n:
        return False
    for seq in _candidates(symbols, n):
        for cuts in itertools.combinations(range(1, len(seq)), n - 1):
            bounds = (0,) + cuts + (len(seq),)
            if all(
                set(seq[bounds[b - 1]:bounds[b]]) <= {b, b % n + 1}
                for b in range(1, n + 1)
            ):
                return True
    return False


def intersector_trace(order: CyclicSequence, cycle: Sequence[VertexLabel]) -> List[int]:
    """Cycle symbols of a geometric order, renumbered 1..m by cycle position."""
    position = {c: i for i, c in enumerate(cycle)}
    distinct = sorted({c for c, _ in order}, key=position.__getitem__)
    rank = {c: i for i, c in enumerate(distinct, start=1)}
    return [rank[c] for c, _ in order]


def _point_in_polygon(point: Point, polygon: Sequence[Point]) -> Optional[bool]:
    """Even-odd containment; None when the point lies on the boundary."""
    inside = False
    m = len(polygon)
    for i in range(m):
        a, b = polygon[i], polygon[(i + 1) % m]
        if orientation(a, b, point) == 0 and on_segment(a, b, point):
            return None
        if (a.y > point.y) != (b.y > point.y):
            x = a.x + (point.y - a.y) * (b.x - a.x) / (b.y - a.y)
            if point.x < x:
                inside = not inside
    return inside


def cell_containment(
    cycle: Sequence[VertexLabel],
    objects: Mapping[VertexLabel, GeometricObject],
    enclosed: Iterable[VertexLabel],
) -> Tuple[bool, List[str]]:
    """Whether every enclosed object lies strictly inside the core cycle polygon."""
    polygon = CoreCycleCurve.build(cycle, objects).polygon()
    edges = [Segment(a, b) for a, b in zip(polygon, polygon[1:] + polygon[:1]) if a != b]
    failures = []
    for v in sorted(enclosed):
        obj = objects[v]
        pts = [p for seg in obj.segments() for p in (seg.p, seg.q)]
        if not all(_point_in_polygon(p, polygon) for p in pts):
            failures.append("{} has a point outside the cycle".format(v))
            continue
        if any(segments_intersect(s, e) for s in obj.segments() for e in edges):
            failures.append("{} crosses the cycle boundary".format(v))
    return not failures, failures


@dataclass
class LemmaReport:
    order_lemma: bool
    trace_partition: Optional[bool]
    cell_containment: bool
    details: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.order_lemma and self.trace_partition is not False and self.cell_containment

    def to_dict(self) -> Dict[str, Any]:
        return {
            "orderLemma": self.order_lemma,
            "tracePartition": self.trace_partition,
            "cellContainment": self.cell_containment,
            "details": list(self.details),
            "passed": self.passed,
        }


def check_lemmas(
    artifact: "ReductionArtifact", objects: Mapping[VertexLabel, GeometricObject]
) -> LemmaReport:
    """Order lemma, trace partition and cell containment on one realization."""
    details = []
    cycle = artifact.cycle_order
    try:
        order_ok = check_order_lemma(artifact.graph, cycle, artifact.order_connectors, objects)
        order = geometric_order(cycle, objects, artifact.order_connectors)
    except DegenerateRealization as e:
        return LemmaReport(False, None, False, [str(e)])
    if not order_ok:
        details.append("geometric order of the connectors differs from the graph order")
    symbols = intersector_trace(order, cycle)
    distinct = len(set(symbols))
    trace_ok: Optional[bool] = None
    if distinct >= MIN_TRACE_SYMBOLS:
        trace_ok = trace_partition_check(symbols, distinct)
        if not trace_ok:
            details.append("the connector trace does not split into blocks")
    excluded = set(cycle) | set(artifact.connectors)
    enclosed = [v for v in artifact.graph.vertices if v not in excluded]
    cells_ok, failures = cell_containment(cycle, objects, enclosed)
    details.extend(failures)
    return LemmaReport(order_ok, trace_ok, cells_ok, details)

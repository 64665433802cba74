"""
Reduction graphs built purely combinatorially from a wiring diagram.

:func:`build_unit_reduction` produces the enhanced arrangement for unit
segments: pseudolines, probes, connectors and an enclosing cycle.
:func:`build_polyline_reduction` produces the k-bend variant with twins and a
frame of vertical chains joined by top and bottom chains.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from segrec.arrangement import (
    InvalidWiring,
    WiringDiagram,
    check_wiring,
    crossing_orders,
    ranks,
)
from segrec.graphs import LabeledGraph, VertexLabel

logger = logging.getLogger(__name__)

ROLES = ("important", "probes", "connectors_left", "connectors_right", "cycle", "frame")

# Arcs between consecutive chain tops (and bottoms) in the polyline frame, so
# that consecutive chain tops are at graph distance three.
FRAME_LINK_ARCS = 2


class InvalidK(ValueError):
    """Raised when the bend count of a polyline reduction is not positive."""


@dataclass
class ReductionArtifact:
    """A reduction graph plus the metadata the realizers and checks need.

    ``connectors`` is the connector set of the enclosing cycle;
    ``order_connectors`` is the subset whose cyclic order is compared by the
    order lemma check (all connectors in the unit case, only the left and
    right connectors in the polyline case).
    """

    kind: str
    wiring: WiringDiagram
    graph: LabeledGraph
    roles: Dict[str, List[VertexLabel]]
    cycle_order: List[VertexLabel]
    left_boundary_order: List[VertexLabel]
    right_boundary_order: List[VertexLabel]
    connectors: List[VertexLabel]
    order_connectors: List[VertexLabel]
    k: Optional[int] = None
    metadata: Dict[str, str] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.wiring.n


def left_probe_order(host: VertexLabel, pair: int, n: int) -> List[VertexLabel]:
    above = [VertexLabel.probe(pair, "above", t) for t in range(n - 1, 0, -1)]
    below = [VertexLabel.probe(pair, "below", t) for t in range(1, n)]
    return above + [host] + below


def _add_canvas_edges(
    graph: LabeledGraph,
    w: WiringDiagram,
    members: Dict[int, List[VertexLabel]],
) -> List[VertexLabel]:
    """Probe vertices and their adjacencies for pseudoline groups ``members``.

    ``members[j]`` are the curves of pair j (just the pseudoline in the unit
    case, the pseudoline and its twin in the polyline case). Returns the probes.
    """
    n = w.n
    rank = ranks(crossing_orders(w))
    probes = [
        VertexLabel.probe(j, side, t)
        for j in range(1, n + 1)
        for side in ("above", "below")
        for t in range(1, n)
    ]
    for p in probes:
        graph.add_vertex(p)
    for p in probes:
        j = p.index[0]
        for m, curves in members.items():
            if m != j and rank[j][m] <= p.depth:
                for curve in curves:
                    graph.add_edge(p, curve)
    for p, q in itertools.combinations(probes, 2):
        j, m = p.index[0], q.index[0]
        if j != m and rank[j][m] <= p.depth and rank[m][j] <= q.depth:
            graph.add_edge(p, q)
    return probes


def build_unit_reduction(w: WiringDiagram) -> ReductionArtifact:
    """The unit-segment reduction graph of ``w``.

    With p = 2n(n-1) probes and d = 2n + p connectors the graph has
    n + p + d + (2d + 6) vertices.
    """
    check_wiring(w)
    n = w.n
    graph = LabeledGraph()
    pseudolines = [VertexLabel.pseudoline(i) for i in range(1, n + 1)]
    for v in pseudolines:
        graph.add_vertex(v)
    for u, v in itertools.combinations(pseudolines, 2):
        graph.add_edge(u, v)
    probes = _add_canvas_edges(graph, w, {i: [VertexLabel.pseudoline(i)] for i in range(1, n + 1)})

    left_order = [v for i in range(1, n + 1) for v in left_probe_order(VertexLabel.pseudoline(i), i, n)]
    right_order = list(reversed(pseudolines))
    d_left, d_right = len(left_order), len(right_order)
    d = d_left + d_right
    cycle = [VertexLabel.cycle(j) for j in range(1, 2 * d + 7)]
    for v in cycle:
        graph.add_vertex(v)
    for u, v in zip(cycle, cycle[1:] + cycle[:1]):
        graph.add_edge(u, v)

    left_connectors = []
    for position, host in enumerate(left_order, start=1):
        c = VertexLabel.connector_left(host)
        graph.add_vertex(c)
        graph.add_edge(c, host)
        graph.add_edge(c, VertexLabel.cycle(2 * position - 1))
        left_connectors.append(c)
    right_connectors = []
    for position, host in enumerate(right_order, start=1):
        c = VertexLabel.connector_right(host)
        graph.add_vertex(c)
        graph.add_edge(c, host)
        graph.add_edge(c, VertexLabel.cycle(unit_right_arc(position, d_left, d_right)))
        right_connectors.append(c)

    connectors = left_connectors + right_connectors
    logger.info("unit reduction: n=%d, %d vertices, %d edges", n, len(graph), graph.number_of_edges())
    return ReductionArtifact(
        kind="unit",
        wiring=w,
        graph=graph,
        roles={
            "important": pseudolines,
            "probes": probes,
            "connectors_left": left_connectors,
            "connectors_right": right_connectors,
            "cycle": cycle,
            "frame": [],
        },
        cycle_order=cycle,
        left_boundary_order=left_order,
        right_boundary_order=right_order,
        connectors=connectors,
        order_connectors=connectors,
    )


def unit_right_arc(position: int, d_left: int, d_right: int) -> int:
    """Cycle index of the arc met by the right connector at ``position``
    (counted from the top)."""
    return 2 * d_left + 4 + 2 * (d_right - position)


def chain_length(i: int, n: int) -> int:
    """Arc count of frame chain ``i``; the first chain carries all left connectors."""
    return 4 * n * n + 1 if i == 1 else 4 * n + 1


def lane(i: int, j: int) -> List[VertexLabel]:
    """The three arcs of lane j in chain i, top to bottom."""
    return [VertexLabel.chain(i, p) for p in (4 * j - 2, 4 * j - 1, 4 * j)]


def build_polyline_reduction(w: WiringDiagram, k: int) -> ReductionArtifact:
    """The k-bend polyline reduction graph of ``w``."""
    check_wiring(w)
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise InvalidK("The bend count k must be a positive integer, got {!r}.".format(k))
    n = w.n
    if n < 2:
        raise InvalidWiring(["polyline reductions need at least two pseudolines, got n={}".format(n)])
    chains = 2 * k + 2
    graph = LabeledGraph()

    pl = {j: VertexLabel.pseudoline(j) for j in range(1, n + 1)}
    tw = {j: VertexLabel.twin(j) for j in range(1, n + 1)}
    curves = [v for j in range(1, n + 1) for v in (pl[j], tw[j])]
    for v in curves:
        graph.add_vertex(v)
    for j in range(1, n + 1):
        graph.add_edge(pl[j], tw[j])
    for j, m in itertools.combinations(range(1, n + 1), 2):
        for u in (pl[j], tw[j]):
            for v in (pl[m], tw[m]):
                graph.add_edge(u, v)
    probes = _add_canvas_edges(graph, w, {j: [pl[j], tw[j]] for j in range(1, n + 1)})

    frame = []
    for i in range(1, chains + 1):
        arcs = [VertexLabel.chain(i, p) for p in range(1, chain_length(i, n) + 1)]
        for v in arcs:
            graph.add_vertex(v)
        for u, v in zip(arcs, arcs[1:]):
            graph.add_edge(u, v)
        frame.extend(arcs)
    links = FRAME_LINK_ARCS * (chains - 1)
    tops = [VertexLabel.top(j) for j in range(1, links + 1)]
    bottoms = [VertexLabel.bottom(j) for j in range(1, links + 1)]
    for v in tops + bottoms:
        graph.add_vertex(v)
    frame.extend(tops + bottoms)
    for i in range(1, chains):
        first, second = 2 * i - 1, 2 * i
        graph.add_edge(VertexLabel.top(first), VertexLabel.chain(i, 1))
        graph.add_edge(VertexLabel.top(first), VertexLabel.top(second))
        graph.add_edge(VertexLabel.top(second), VertexLabel.chain(i + 1, 1))
        graph.add_edge(VertexLabel.bottom(first), VertexLabel.chain(i, chain_length(i, n)))
        graph.add_edge(VertexLabel.bottom(first), VertexLabel.bottom(second))
        graph.add_edge(VertexLabel.bottom(second), VertexLabel.chain(i + 1, chain_length(i + 1, n)))

    for i in range(2, chains):
        for j in range(1, n + 1):
            upper, _, lower = lane(i, j)
            if i % 2 == 0:
                graph.add_edge(pl[j], upper)
                graph.add_edge(tw[j], lower)
            else:
                graph.add_edge(pl[j], lower)
                graph.add_edge(tw[j], upper)

    left_order = [
        v
        for j in range(n, 0, -1)
        for v in left_probe_order(pl[j], j, n)[:n]
        + [tw[j]]
        + left_probe_order(pl[j], j, n)[n:]
    ]
    left_connectors = []
    for position, host in enumerate(left_order, start=1):
        c = VertexLabel.connector_left(host)
        graph.add_vertex(c)
        graph.add_edge(c, host)
        graph.add_edge(c, VertexLabel.chain(1, 2 * position))
        left_connectors.append(c)
    right_order = [v for j in range(1, n + 1) for v in (pl[j], tw[j])]
    right_connectors = []
    for j in range(1, n + 1):
        upper, _, lower = lane(chains, j)
        for host, arc in ((pl[j], upper), (tw[j], lower)):
            c = VertexLabel.connector_right(host)
            graph.add_vertex(c)
            graph.add_edge(c, host)
            graph.add_edge(c, arc)
            right_connectors.append(c)

    outer = _outer_cycle(n, k)
    separators = [
        VertexLabel.chain(i, p) for i in range(2, chains) for p in (2, 4 * n)
    ]
    logger.info(
        "polyline reduction: n=%d k=%d, %d vertices, %d edges",
        n, k, len(graph), graph.number_of_edges(),
    )
    return ReductionArtifact(
        kind="polyline",
        wiring=w,
        graph=graph,
        roles={
            "important": curves,
            "probes": probes,
            "connectors_left": left_connectors,
            "connectors_right": right_connectors,
            "cycle": [],
            "frame": frame,
        },
        cycle_order=outer,
        left_boundary_order=left_order,
        right_boundary_order=right_order,
        connectors=left_connectors + right_connectors + separators,
        order_connectors=left_connectors + right_connectors,
        k=k,
        metadata={"leftOrder": "interleaved"},
    )


def _outer_cycle(n: int, k: int) -> List[VertexLabel]:
    """The outer frame boundary: down the first chain, right along the
    bottom, up the last chain and back left along the top."""
    chains = 2 * k + 2
    cycle = [VertexLabel.chain(1, p) for p in range(1, chain_length(1, n) + 1)]
    for i in range(1, chains):
        cycle += [VertexLabel.bottom(2 * i - 1), VertexLabel.bottom(2 * i)]
        if i + 1 < chains:
            cycle.append(VertexLabel.chain(i + 1, chain_length(i + 1, n)))
    cycle += [VertexLabel.chain(chains, p) for p in range(chain_length(chains, n), 0, -1)]
    for i in range(chains - 1, 0, -1):
        cycle += [VertexLabel.top(2 * i), VertexLabel.top(2 * i - 1)]
        if i > 1:
            cycle.append(VertexLabel.chain(i, 1))
    return cycle


def vertex_count_unit(n: int) -> int:
    p = 2 * n * (n - 1)
    d = 2 * n + p
    return n + p + d + 2 * d + 6


def frame_chain_arcs(n: int, k: int) -> int:
    return sum(chain_length(i, n) for i in range(1, 2 * k + 3))

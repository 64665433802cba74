"""
JSON documents shared by the command line and the library.

Rationals are written as ``"num/den"`` strings and vertices by their
canonical label strings, so every document parses back to an equal object.
"""

import json
from typing import Any, Dict, List

from segrec.arrangement import Line, LineArrangement, WiringDiagram, wiring_from_lines
from segrec.geom import Point, Polyline, UnitSegment
from segrec.graphs import LabeledGraph, VertexLabel, parse_label
from segrec.realizer import Realization
from segrec.reduction import ROLES, ReductionArtifact
from segrec.utilities import ParseError, format_rational, to_rational


def load_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError("Invalid JSON: {}".format(e.msg), e.lineno, e.colno)


def _field(data: Any, key: str, kind: str) -> Any:
    if not isinstance(data, dict) or key not in data:
        raise ParseError("{} document lacks the {!r} field.".format(kind, key))
    return data[key]


def _rational(value: Any, where: str):
    if not isinstance(value, (str, int)) or isinstance(value, bool):
        raise ParseError("Expected a 'num/den' string for {}, got {!r}.".format(where, value))
    try:
        return to_rational(value)
    except (TypeError, ValueError) as e:
        raise ParseError("{} ({})".format(e, where))


def _point(value: Any, where: str) -> Point:
    if not isinstance(value, list) or len(value) != 2:
        raise ParseError("Expected a [x, y] pair for {}, got {!r}.".format(where, value))
    return Point(_rational(value[0], where), _rational(value[1], where))


def _pair(p: Point) -> List[str]:
    return [format_rational(p.x), format_rational(p.y)]


def _labels(values: Any, where: str) -> List[VertexLabel]:
    if not isinstance(values, list):
        raise ParseError("Expected a list of labels for {}, got {!r}.".format(where, values))
    return [parse_label(str(v)) for v in values]


# Wiring diagrams and line arrangements


def wiring_to_dict(w: WiringDiagram) -> Dict[str, Any]:
    return {"n": w.n, "swaps": list(w.swaps)}


def wiring_from_dict(data: Any) -> WiringDiagram:
    """A wiring document, or the wiring of a lines document."""
    if isinstance(data, dict) and "lines" in data:
        return wiring_from_lines(lines_from_dict(data))
    n = _field(data, "n", "Wiring")
    swaps = _field(data, "swaps", "Wiring")
    if not isinstance(n, int) or not isinstance(swaps, list) or not all(isinstance(s, int) for s in swaps):
        raise ParseError("Wiring needs an integer 'n' and a list of integer 'swaps'.")
    return WiringDiagram(n, tuple(swaps))


def lines_to_dict(arrangement: LineArrangement) -> Dict[str, Any]:
    return {
        "lines": [
            {"slope": format_rational(line.slope), "intercept": format_rational(line.intercept)}
            for line in arrangement.lines
        ]
    }


def lines_from_dict(data: Any) -> LineArrangement:
    lines = _field(data, "lines", "Lines")
    if not isinstance(lines, list):
        raise ParseError("'lines' must be a list, got {!r}.".format(lines))
    out = []
    for i, entry in enumerate(lines):
        where = "line {}".format(i)
        out.append(
            Line(_rational(_field(entry, "slope", where), where), _rational(_field(entry, "intercept", where), where))
        )
    return LineArrangement(tuple(out))


# Graphs and reduction artifacts


def graph_to_dict(g: LabeledGraph) -> Dict[str, Any]:
    return {
        "vertices": [{"label": str(v)} for v in g.sorted_vertices()],
        "edges": [[str(u), str(v)] for u, v in g.sorted_edges()],
    }


def graph_from_dict(data: Any) -> LabeledGraph:
    vertices = _field(data, "vertices", "Graph")
    edges = _field(data, "edges", "Graph")
    if not isinstance(vertices, list) or not isinstance(edges, list):
        raise ParseError("Graph 'vertices' and 'edges' must be lists.")
    g = LabeledGraph(parse_label(str(_field(v, "label", "Vertex"))) for v in vertices)
    for edge in edges:
        if not isinstance(edge, list) or len(edge) != 2:
            raise ParseError("Edge must be a pair of labels, got {!r}.".format(edge))
        u, v = (parse_label(str(x)) for x in edge)
        try:
            g.add_edge(u, v)
        except ValueError as e:
            raise ParseError(str(e))
    return g


def artifact_to_dict(art: ReductionArtifact) -> Dict[str, Any]:
    """The graph document plus the role side-table and boundary orders."""
    data = graph_to_dict(art.graph)
    data.update(
        {
            "kind": art.kind,
            "n": art.n,
            "k": art.k,
            "wiring": wiring_to_dict(art.wiring),
            "roles": {role: [str(v) for v in members] for role, members in art.roles.items()},
            "cycleOrder": [str(v) for v in art.cycle_order],
            "leftBoundaryOrder": [str(v) for v in art.left_boundary_order],
            "rightBoundaryOrder": [str(v) for v in art.right_boundary_order],
            "connectors": [str(v) for v in art.connectors],
            "orderConnectors": [str(v) for v in art.order_connectors],
            "metadata": dict(art.metadata),
        }
    )
    return data


def artifact_from_dict(data: Any) -> ReductionArtifact:
    roles = _field(data, "roles", "Reduction")
    if not isinstance(roles, dict) or set(roles) - set(ROLES):
        raise ParseError("Unknown roles in {!r}.".format(roles))
    k = data.get("k")
    return ReductionArtifact(
        kind=str(_field(data, "kind", "Reduction")),
        wiring=wiring_from_dict(_field(data, "wiring", "Reduction")),
        graph=graph_from_dict(data),
        roles={role: _labels(members, role) for role, members in roles.items()},
        cycle_order=_labels(_field(data, "cycleOrder", "Reduction"), "cycleOrder"),
        left_boundary_order=_labels(_field(data, "leftBoundaryOrder", "Reduction"), "leftBoundaryOrder"),
        right_boundary_order=_labels(_field(data, "rightBoundaryOrder", "Reduction"), "rightBoundaryOrder"),
        connectors=_labels(_field(data, "connectors", "Reduction"), "connectors"),
        order_connectors=_labels(_field(data, "orderConnectors", "Reduction"), "orderConnectors"),
        k=int(k) if k is not None else None,
        metadata={str(a): str(b) for a, b in data.get("metadata", {}).items()},
    )


def is_artifact(data: Any) -> bool:
    return isinstance(data, dict) and "roles" in data and "cycleOrder" in data


# Realizations


def realization_to_dict(realization: Realization) -> Dict[str, Any]:
    objects = []
    for v in sorted(realization.objects):
        obj = realization.objects[v]
        if isinstance(obj, UnitSegment):
            objects.append({"vertex": str(v), "anchor": _pair(obj.anchor), "direction": _pair(obj.direction)})
        else:
            objects.append({"vertex": str(v), "points": [_pair(p) for p in obj.points]})
    data: Dict[str, Any] = {"kind": realization.kind, "objects": objects}
    if realization.kind == "polylines":
        data["k"] = realization.k
    return data


def realization_from_dict(data: Any) -> Realization:
    kind = _field(data, "kind", "Realization")
    entries = _field(data, "objects", "Realization")
    if kind not in ("unit_segments", "polylines") or not isinstance(entries, list):
        raise ParseError("Unknown realization kind {!r}.".format(kind))
    objects: Dict[VertexLabel, Any] = {}
    for entry in entries:
        v = parse_label(str(_field(entry, "vertex", "Object")))
        where = str(v)
        try:
            if kind == "unit_segments":
                objects[v] = UnitSegment(
                    _point(_field(entry, "anchor", where), where), _point(_field(entry, "direction", where), where)
                )
            else:
                points = _field(entry, "points", where)
                if not isinstance(points, list):
                    raise ParseError("'points' of {} must be a list.".format(where))
                objects[v] = Polyline(tuple(_point(p, where) for p in points))
        except ParseError:
            raise
        except ValueError as e:
            raise ParseError("{} ({})".format(e, where))
    k = None
    if kind == "polylines":
        k = _field(data, "k", "Realization")
        bad = [str(v) for v, obj in objects.items() if obj.bends != k]
        if bad:
            raise ParseError("Polylines {} do not have k={} bends.".format(", ".join(bad), k))
    return Realization(kind, objects, k)


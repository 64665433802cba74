import branca

from segrec.arrangement import (
    DegenerateArrangement,
    InvalidWiring,
    Line,
    LineArrangement,
    UnknownCatalogEntry,
    WiringDiagram,
    catalog,
    crossing_orders,
    equivalent,
    random_arrangement,
    reflect,
    squeeze,
    validate_wiring,
    wiring_from_lines,
)
from segrec.encoder import (
    MissingVariable,
    PolySystem,
    emit_json,
    emit_smtlib,
    encode_polyline,
    encode_stretchability,
    encode_unit,
    evaluate,
    read_json,
    read_smtlib,
)
from segrec.frame import realize_polyline
from segrec.geom import (
    Point,
    Polyline,
    Segment,
    UnitSegment,
    orientation,
    segments_intersect,
    snap_slope_to_unit_direction,
)
from segrec.graphs import LabeledGraph, VertexLabel, graphs_equal, intersection_graph, parse_label
from segrec.realizer import (
    Realization,
    RealizerParams,
    RefinementExhausted,
    WiringMismatch,
    realize_unit,
)
from segrec.reduction import (
    InvalidK,
    ReductionArtifact,
    build_polyline_reduction,
    build_unit_reduction,
)
from segrec.render import draw
from segrec.search import NotFound, Placement, SearchConfig, certify, penalty, search_unit
from segrec.structure import (
    CyclicSequence,
    DegenerateRealization,
    SymbolOutOfRange,
    check_lemmas,
    check_order_lemma,
    trace_partition_check,
    validate_connectors,
    validate_intersectors,
)
from segrec.utilities import ParseError

try:
    from ._version import __version__
except ImportError:
    __version__ = "unknown"


if branca.__version__ != "unknown" and tuple(
    int(x) for x in branca.__version__.split(".")[:2]
) < (0, 6):
    raise ImportError(
        "branca version 0.6.0 or higher is required. "
        "Update branca with e.g. `pip install branca --upgrade`."
    )


__all__ = [
    "CyclicSequence",
    "DegenerateArrangement",
    "DegenerateRealization",
    "InvalidK",
    "InvalidWiring",
    "LabeledGraph",
    "Line",
    "LineArrangement",
    "MissingVariable",
    "NotFound",
    "ParseError",
    "Placement",
    "Point",
    "PolySystem",
    "Polyline",
    "Realization",
    "RealizerParams",
    "ReductionArtifact",
    "RefinementExhausted",
    "SearchConfig",
    "Segment",
    "SymbolOutOfRange",
    "UnitSegment",
    "UnknownCatalogEntry",
    "VertexLabel",
    "WiringDiagram",
    "WiringMismatch",
    "build_polyline_reduction",
    "build_unit_reduction",
    "catalog",
    "certify",
    "check_lemmas",
    "check_order_lemma",
    "crossing_orders",
    "draw",
    "emit_json",
    "emit_smtlib",
    "encode_polyline",
    "encode_stretchability",
    "encode_unit",
    "equivalent",
    "evaluate",
    "graphs_equal",
    "intersection_graph",
    "orientation",
    "parse_label",
    "penalty",
    "random_arrangement",
    "read_json",
    "read_smtlib",
    "realize_polyline",
    "realize_unit",
    "reflect",
    "search_unit",
    "segments_intersect",
    "snap_slope_to_unit_direction",
    "squeeze",
    "trace_partition_check",
    "validate_connectors",
    "validate_intersectors",
    "validate_wiring",
    "wiring_from_lines",
]

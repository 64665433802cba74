"""
Polynomial System Tests
-----------------------

"""

import json
import os
from fractions import Fraction

import numpy as np
import pytest
import sympy

from segrec.arrangement import WiringDiagram, catalog, reflect, wiring_from_lines
from segrec.encoder import (
    EQ,
    GT,
    And,
    Atom,
    Constraint,
    MissingVariable,
    Not,
    Or,
    PolySystem,
    assignment_from_lines,
    assignment_from_objects,
    atom_from_expr,
    emit_json,
    emit_smtlib,
    encode_polyline,
    encode_stretchability,
    encode_unit,
    evaluate,
    read_json,
    read_smtlib,
    segment_intersection,
    violated_constraints,
)
from segrec.formats import graph_from_dict, realization_from_dict
from segrec.geom import Point, Polyline, UnitSegment, unit_direction_from_parameter
from segrec.graphs import LabeledGraph, intersection_graph
from segrec.graphs import VertexLabel as V
from segrec.utilities import ParseError

rootpath = os.path.join(os.path.abspath(os.path.dirname(__file__)), "fixtures")

A, B = V.named("a"), V.named("b")


def k2():
    return LabeledGraph([A, B], [(A, B)])


def two_k1():
    return LabeledGraph([A, B])


def unit(anchor, direction):
    return UnitSegment(Point.of(anchor), Point.of(direction))


CROSSING = {
    A: unit((0, 0), (1, 0)),
    B: unit((Fraction(1, 2), Fraction(-1, 2)), (0, 1)),
}
APART = {
    A: unit((0, 0), (1, 0)),
    B: unit((5, Fraction(-1, 2)), (0, 1)),
}


def test_unit_system_shape():
    system = encode_unit(k2())
    assert system.variables == ("a.x1", "a.y1", "a.x2", "a.y2", "b.x1", "b.y1", "b.x2", "b.y2")
    names = [c.name for c in system.constraints]
    assert names == ["unit(a)", "unit(b)", "edge(a,b)"]
    assert isinstance(system.constraints[0].formula, Atom)
    assert system.constraints[0].formula.rel == EQ


def test_unit_system_at_witness():
    assert evaluate(encode_unit(k2()), assignment_from_objects(CROSSING))
    assert not evaluate(encode_unit(k2()), assignment_from_objects(APART))
    assert evaluate(encode_unit(two_k1()), assignment_from_objects(APART))


def test_unit_system_detects_mutation():
    system = encode_unit(k2())
    values = assignment_from_objects(CROSSING)
    values["b.x1"] = values["b.x2"] = Fraction(5)
    assert violated_constraints(system, values) == ["edge(a,b)"]
    values["b.y2"] = Fraction(1)
    assert violated_constraints(system, values) == ["unit(b)", "edge(a,b)"]


def random_unit_objects(rng, m):
    def quarter(lo, hi):
        return Fraction(int(rng.integers(lo, hi + 1)), 4)

    return {
        V.named("s{}".format(i)): UnitSegment(
            Point(quarter(-6, 6), quarter(-6, 6)), unit_direction_from_parameter(quarter(-6, 6))
        )
        for i in range(m)
    }


def test_unit_system_agrees_with_exact_geometry():
    rng = np.random.default_rng(11)
    for _ in range(50):
        objects = random_unit_objects(rng, 4)
        values = assignment_from_objects(objects)
        g = intersection_graph(objects)
        system = encode_unit(g)
        assert evaluate(system, values)
        names = {c.name for c in system.constraints}
        vertices = g.sorted_vertices()
        for i, u in enumerate(vertices):
            for v in vertices[i + 1:]:
                mutated = g.copy()
                if g.has_edge(u, v):
                    mutated.remove_edge(u, v)
                else:
                    mutated.add_edge(u, v)
                mutated_system = encode_unit(mutated)
                changed = sorted({c.name for c in mutated_system.constraints} - names)
                assert len(changed) == 1
                assert violated_constraints(mutated_system, values) == changed


def test_empty_graph_is_not_satisfied_by_crossing():
    system = encode_unit(two_k1())
    assert violated_constraints(system, assignment_from_objects(CROSSING)) == ["nonedge(a,b)"]


def test_segment_intersection_is_closed():
    names = ["px", "py", "qx", "qy", "rx", "ry", "sx", "sy"]
    formula = segment_intersection(names)

    def at(*coords):
        return dict(zip(names, map(Fraction, coords)))

    assert formula.holds(at(0, 0, 1, 0, 1, 0, 2, 0))
    assert formula.holds(at(0, 0, 2, 0, 1, 0, 1, 3))
    assert not formula.holds(at(0, 0, 1, 0, 2, 0, 3, 0))
    assert not formula.holds(at(0, 0, 1, 0, 0, 1, 1, 1))


def test_segment_intersection_with_point_piece():
    names = ["px", "py", "qx", "qy", "rx", "ry", "sx", "sy"]
    formula = segment_intersection(names)

    def at(*coords):
        return dict(zip(names, map(Fraction, coords)))

    # p = q inside the disk over rs but off the segment
    assert not formula.holds(at(1, "1/2", 1, "1/2", 0, 0, 2, 0))
    assert not formula.holds(at(0, 0, 2, 0, 1, "1/2", 1, "1/2"))
    assert formula.holds(at(1, 0, 1, 0, 0, 0, 2, 0))
    assert not formula.holds(at(3, 0, 3, 0, 0, 0, 2, 0))
    assert formula.holds(at(1, 1, 1, 1, 1, 1, 1, 1))
    assert not formula.holds(at(1, 1, 1, 1, 1, 2, 1, 2))


def test_polyline_system_with_repeated_bend():
    system = encode_polyline(two_k1(), 1)
    values = {
        "a.x0": Fraction(1), "a.y0": Fraction(1, 2),
        "a.x1": Fraction(1), "a.y1": Fraction(1, 2),
        "a.x2": Fraction(1), "a.y2": Fraction(3),
        "b.x0": Fraction(0), "b.y0": Fraction(0),
        "b.x1": Fraction(2), "b.y1": Fraction(0),
        "b.x2": Fraction(3), "b.y2": Fraction(0),
    }
    assert evaluate(system, values)
    values["a.y1"] = Fraction(0)
    assert violated_constraints(system, values) == ["nonedge(a,b)"]


def test_polyline_system_shape():
    system = encode_polyline(k2(), 1)
    assert len(system.variables) == 12
    assert system.variables[:6] == ("a.x0", "a.y0", "a.x1", "a.y1", "a.x2", "a.y2")
    (edge,) = system.constraints
    assert edge.name == "edge(a,b)"
    assert isinstance(edge.formula, Or)
    assert len(edge.formula.args) == 4


def test_polyline_system_at_witness():
    objects = {
        A: Polyline([(0, 0), (1, 1), (2, 0)]),
        B: Polyline([(0, 2), (1, Fraction(1, 2)), (2, 2)]),
    }
    values = assignment_from_objects(objects)
    assert evaluate(encode_polyline(k2(), 1), values)
    assert not evaluate(encode_polyline(two_k1(), 1), values)
    nonedge = encode_polyline(two_k1(), 1).constraints[0].formula
    assert isinstance(nonedge, And)
    assert all(isinstance(arg, Not) for arg in nonedge.args)


def test_stretchability_small():
    one = encode_stretchability(WiringDiagram(1, ()))
    assert one.variables == ("m1", "b1")
    assert one.constraints == ()
    two = encode_stretchability(WiringDiagram(2, (1,)))
    assert [c.name for c in two.constraints] == ["slope(1<2)", "distinct(1,2)"]


@pytest.mark.parametrize("name", ["generic3", "generic4", "generic5"])
def test_catalog_lines_stretch_their_wiring(name):
    lines = catalog(name)
    wiring = wiring_from_lines(lines)
    values = assignment_from_lines(lines)
    assert evaluate(encode_stretchability(wiring), values)
    violated = violated_constraints(encode_stretchability(reflect(wiring)), values)
    assert violated
    assert all(name.startswith("order(") for name in violated)


def test_missing_variable():
    with pytest.raises(MissingVariable):
        evaluate(encode_unit(k2()), {"a.x1": 0})


def test_undeclared_variable_is_rejected():
    with pytest.raises(ValueError):
        PolySystem(("x",), (Constraint("c", atom_from_expr(sympy.Symbol("y"), GT)),))


def positive_x():
    return PolySystem(("x",), (Constraint("positive", atom_from_expr(sympy.Symbol("x"), GT)),))


def test_smtlib_text():
    text = emit_smtlib(positive_x())
    assert text.splitlines() == [
        "(set-logic QF_NRA)",
        "(declare-fun x () Real)",
        "; positive",
        "(assert (> x 0))",
        "(check-sat)",
        "(get-model)",
    ]


def test_smtlib_negative_coefficients():
    x, y = sympy.symbols("x y")
    system = PolySystem(("x", "y"), (Constraint("c", atom_from_expr(x - 3 * y - 2, EQ)),))
    text = emit_smtlib(system)
    assert "(- 3)" in text
    assert read_smtlib(text) == system


@pytest.mark.parametrize(
    "system",
    [
        encode_unit(k2()),
        encode_polyline(two_k1(), 1),
        encode_stretchability(WiringDiagram(3, (2, 1, 2))),
    ],
)
def test_round_trips(system):
    assert read_smtlib(emit_smtlib(system)) == system
    assert read_json(emit_json(system)) == system


def test_smtlib_reader_accepts_foreign_asserts():
    system = read_smtlib("(declare-fun x () Real)\n(assert (< 1 x))\n")
    assert system.constraints[0].name == "c0"
    assert evaluate(system, {"x": 2})
    assert not evaluate(system, {"x": 1})


def test_smtlib_reader_reports_location():
    with pytest.raises(ParseError) as excinfo:
        read_smtlib("(declare-fun x () Real)\n(assert (> y 0))\n")
    assert excinfo.value.line == 2
    with pytest.raises(ParseError):
        read_smtlib("(assert (> 1 0)")


def test_json_reader_reports_location():
    with pytest.raises(ParseError) as excinfo:
        read_json('{\n  "variables": [\n')
    assert excinfo.value.line is not None
    with pytest.raises(ParseError):
        read_json('{"variables": ["x"]}')
    with pytest.raises(ParseError):
        read_json('{"variables": [], "constraints": [{"name": "c", "formula": {"op": "xor"}}]}')


def test_json_is_canonical():
    text = emit_json(positive_x())
    assert text.endswith("\n")
    assert text.index('"constraints"') < text.index('"variables"')


@pytest.mark.parametrize("name", ["c4", "c5", "c6", "k4"])
def test_committed_witnesses_satisfy_unit_system(name):
    with open(os.path.join(rootpath, "{}_graph.json".format(name))) as f:
        graph = graph_from_dict(json.load(f))
    with open(os.path.join(rootpath, "{}_realization.json".format(name))) as f:
        realization = realization_from_dict(json.load(f))
    system = encode_unit(graph)
    assert evaluate(system, assignment_from_objects(realization.objects))

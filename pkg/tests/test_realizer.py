"""
Unit Realizer Tests
-------------------

"""

from fractions import Fraction

import pytest

from segrec.arrangement import catalog, random_arrangement, reflect, wiring_from_lines
from segrec.formats import realization_to_dict
from segrec.graphs import Kind, graphs_equal, intersection_graph
from segrec.reduction import build_polyline_reduction, build_unit_reduction
from segrec.realizer import (
    MAX_A,
    RealizerParams,
    WiringMismatch,
    realize_unit,
)
from segrec.structure import check_lemmas
from segrec.utilities import dump_json


@pytest.fixture(scope="module", params=["generic2", "generic3", "generic5"])
def realized(request):
    lines = catalog(request.param)
    art = build_unit_reduction(wiring_from_lines(lines))
    return art, realize_unit(lines, art)


def test_realization_matches_reduction_graph(realized):
    art, realization = realized
    assert realization.kind == "unit_segments"
    assert set(realization.objects) == art.graph.vertices
    ok, diff = graphs_equal(art.graph, intersection_graph(realization.objects))
    assert ok, diff.report()


def test_vertex_count(realized):
    art, realization = realized
    expected = {2: 36, 3: 75, 5: 201}[art.n]
    assert len(art.graph) == expected
    assert len(realization) == expected


def test_objects_are_unit_length(realized):
    _, realization = realized
    for seg in realization.objects.values():
        d = seg.direction
        assert d.x * d.x + d.y * d.y == 1


def test_important_segments_are_squeezed(realized):
    art, realization = realized
    for v in art.roles["important"]:
        assert v.kind is Kind.PSEUDOLINE
        assert abs(realization.objects[v].slope) <= MAX_A


def test_important_crossings_inside_square(realized):
    art, realization = realized
    segments = [realization.objects[v] for v in art.roles["important"]]
    for i, s in enumerate(segments):
        for t in segments[i + 1:]:
            bs = s.anchor.y - s.slope * s.anchor.x
            bt = t.anchor.y - t.slope * t.anchor.x
            x = (bt - bs) / (s.slope - t.slope)
            assert abs(x) < MAX_A
            assert abs(s.slope * x + bs) < MAX_A


def test_lemmas_hold_on_realization(realized):
    art, realization = realized
    report = check_lemmas(art, realization.objects)
    assert report.passed, report.details


def test_reflected_wiring_is_rejected():
    lines = catalog("generic3")
    art = build_unit_reduction(reflect(wiring_from_lines(lines)))
    with pytest.raises(WiringMismatch):
        realize_unit(lines, art)


def test_realize_unit_needs_unit_reduction():
    lines = catalog("generic2")
    art = build_polyline_reduction(wiring_from_lines(lines), 1)
    with pytest.raises(ValueError):
        realize_unit(lines, art)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"a": 0},
        {"a": Fraction(1, 10)},
        {"rho": -1},
        {"eta": 0},
        {"max_refine": 0},
        {"max_refine": 1.5},
    ],
)
def test_params_validation(kwargs):
    with pytest.raises(ValueError):
        RealizerParams(**kwargs)


def test_params_spacing_must_fit_squeeze():
    params = RealizerParams(rho=Fraction(1, 100))
    params.check_for(2)
    with pytest.raises(ValueError):
        params.check_for(3)


def test_params_accept_strings():
    params = RealizerParams(a="1/40", rho="1/2000")
    assert params.a == Fraction(1, 40)
    assert params.rho == Fraction(1, 2000)


@pytest.mark.parametrize("seed", range(25))
def test_random_arrangements_realize(seed):
    lines = random_arrangement(2 + seed % 4, seed)
    art = build_unit_reduction(wiring_from_lines(lines))
    realization = realize_unit(lines, art)
    ok, diff = graphs_equal(art.graph, intersection_graph(realization.objects))
    assert ok, diff.report()
    report = check_lemmas(art, realization.objects)
    assert report.passed, report.details


def test_realize_unit_is_deterministic():
    lines = catalog("generic3")
    art = build_unit_reduction(wiring_from_lines(lines))
    first = dump_json(realization_to_dict(realize_unit(lines, art)))
    second = dump_json(realization_to_dict(realize_unit(lines, art)))
    assert first == second

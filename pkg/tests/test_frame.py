"""
Polyline Frame Tests
--------------------

"""

import pytest

from segrec.arrangement import catalog, wiring_from_lines
from segrec.frame import (
    bends_right_of_canvas,
    interior_point_counts,
    realize_polyline,
    twin_crossings_by_region,
)
from segrec.graphs import graphs_equal, intersection_graph
from segrec.reduction import build_polyline_reduction, build_unit_reduction
from segrec.structure import check_lemmas


@pytest.fixture(scope="module", params=[("generic2", 1), ("generic2", 2), ("generic3", 1)])
def realized(request):
    name, k = request.param
    lines = catalog(name)
    art = build_polyline_reduction(wiring_from_lines(lines), k)
    return art, k, realize_polyline(lines, art, k)


def test_every_object_has_k_bends(realized):
    art, k, realization = realized
    assert realization.kind == "polylines"
    assert realization.k == k
    assert set(interior_point_counts(realization).values()) == {k}


def test_polyline_graph_matches(realized):
    art, _, realization = realized
    ok, diff = graphs_equal(art.graph, intersection_graph(realization.objects))
    assert ok, diff.report()


def test_pairs_cross_between_consecutive_chains(realized):
    art, k, realization = realized
    regions = twin_crossings_by_region(realization, art.n, k)
    assert sorted(regions) == list(range(1, art.n + 1))
    for counts in regions.values():
        assert len(counts) == 2 * k
        assert min(counts) >= 1


def test_bends_stay_right_of_canvas(realized):
    _, _, realization = realized
    assert bends_right_of_canvas(realization)


def test_order_lemma_on_frame(realized):
    art, _, realization = realized
    report = check_lemmas(art, realization.objects)
    assert report.passed, report.details


def test_k_must_match_reduction():
    lines = catalog("generic2")
    art = build_polyline_reduction(wiring_from_lines(lines), 1)
    with pytest.raises(ValueError):
        realize_polyline(lines, art, 3)


def test_unit_reduction_is_rejected():
    lines = catalog("generic2")
    art = build_unit_reduction(wiring_from_lines(lines))
    with pytest.raises(ValueError):
        realize_polyline(lines, art, 1)

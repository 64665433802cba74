"""
Arrangement Tests
-----------------

"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from segrec.arrangement import (
    DegenerateArrangement,
    InvalidWiring,
    Line,
    LineArrangement,
    UnknownCatalogEntry,
    WiringDiagram,
    catalog,
    catalog_names,
    check_wiring,
    crossing_orders,
    equivalent,
    line_crossing_orders,
    random_arrangement,
    ranks,
    reflect,
    squeeze,
    validate_wiring,
    wiring_from_lines,
)
from segrec.geom import Point


@pytest.mark.parametrize(
    "n, swaps",
    [(1, ()), (2, (1,)), (3, (1, 2, 1)), (3, (2, 1, 2)), (4, (1, 2, 3, 1, 2, 1))],
)
def test_validate_wiring_valid(n, swaps):
    assert validate_wiring(WiringDiagram(n, swaps)) == []


def test_validate_wiring_violations():
    violations = validate_wiring(WiringDiagram(3, (1, 1, 2)))
    assert "pair {1,2} swaps 2 times" in violations
    assert "pair {1,3} swaps 0 times" in violations
    with pytest.raises(InvalidWiring) as excinfo:
        check_wiring(WiringDiagram(3, (1, 1, 2)))
    assert excinfo.value.violations == violations


@pytest.mark.parametrize(
    "w",
    [WiringDiagram(3, (1, 2)), WiringDiagram(3, (1, 5, 1)), WiringDiagram(0, ())],
)
def test_validate_wiring_rejects(w):
    assert validate_wiring(w)


@pytest.mark.parametrize(
    "swaps, expected",
    [
        ((1, 2, 1), {1: [2, 3], 2: [1, 3], 3: [1, 2]}),
        ((2, 1, 2), {1: [3, 2], 2: [3, 1], 3: [2, 1]}),
    ],
)
def test_crossing_orders(swaps, expected):
    assert crossing_orders(WiringDiagram(3, swaps)) == expected


def test_crossing_orders_two_lines():
    assert crossing_orders(WiringDiagram(2, (1,))) == {1: [2], 2: [1]}


def test_ranks():
    rank = ranks(crossing_orders(WiringDiagram(3, (2, 1, 2))))
    assert rank[1] == {3: 1, 2: 2}
    assert rank[3] == {2: 1, 1: 2}


def test_wiring_from_lines():
    two = LineArrangement((Line(1, 0), Line(-1, 1)))
    assert wiring_from_lines(two) == WiringDiagram(2, (1,))
    assert wiring_from_lines(catalog("generic3")) == WiringDiagram(3, (2, 1, 2))


def test_wiring_from_lines_degenerate():
    with pytest.raises(DegenerateArrangement):
        wiring_from_lines(LineArrangement((Line(1, 0), Line(1, 1))))
    concurrent = LineArrangement((Line(-1, 0), Line(0, 0), Line(1, 0)))
    with pytest.raises(DegenerateArrangement):
        wiring_from_lines(concurrent)


def test_line_crossing_orders_agree():
    for name in catalog_names():
        arrangement = catalog(name)
        assert line_crossing_orders(arrangement) == crossing_orders(wiring_from_lines(arrangement))


def test_equivalent():
    w1, w2 = WiringDiagram(3, (1, 2, 1)), WiringDiagram(3, (2, 1, 2))
    assert equivalent(w1, w1)
    assert not equivalent(w1, w2)
    assert equivalent(w1, w2, allow_reflection=True)
    assert reflect(w1) == w2
    assert not equivalent(w1, WiringDiagram(2, (1,)))


def test_catalog():
    assert catalog("generic2").lines == (Line(1, 1), Line(2, 4))
    assert catalog("generic3").crossings()[(1, 2)] == Point(-3, -2)
    assert catalog_names()[0] == "generic2"
    with pytest.raises(UnknownCatalogEntry):
        catalog("generic9")
    with pytest.raises(UnknownCatalogEntry):
        catalog("tetrahedron")


def test_squeeze_conforming_is_unchanged():
    small = LineArrangement((Line(Fraction(1, 100), 0), Line(Fraction(-1, 100), Fraction(1, 2000))))
    assert squeeze(small, Fraction(1, 20)) is small


@pytest.mark.parametrize("name", ["generic2", "generic3", "generic5", "generic8"])
def test_squeeze_catalog(name):
    a = Fraction(1, 20)
    arrangement = catalog(name)
    squeezed = squeeze(arrangement, a)
    assert all(abs(line.slope) <= a for line in squeezed.lines)
    assert all(abs(p.x) < a and abs(p.y) < a for p in squeezed.crossings().values())
    assert wiring_from_lines(squeezed) == wiring_from_lines(arrangement)


def test_squeeze_crossed_pair():
    pair = LineArrangement((Line(1, 3), Line(-1, -5)))
    squeezed = squeeze(pair, Fraction(1, 20))
    assert all(abs(line.slope) <= Fraction(1, 20) for line in squeezed.lines)
    assert wiring_from_lines(squeezed) == WiringDiagram(2, (1,))


def test_squeeze_rejects_bound():
    with pytest.raises(ValueError):
        squeeze(catalog("generic2"), 0)


def test_random_arrangement_is_seeded():
    assert random_arrangement(5, seed=7) == random_arrangement(5, seed=7)
    assert validate_wiring(wiring_from_lines(random_arrangement(5, seed=7))) == []
    with pytest.raises(ValueError):
        random_arrangement(0)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=2, max_value=6), st.integers(min_value=0, max_value=10_000))
def test_random_wiring_roundtrip(n, seed):
    arrangement = random_arrangement(n, seed=seed)
    w = wiring_from_lines(arrangement)
    assert validate_wiring(w) == []
    assert crossing_orders(w) == line_crossing_orders(arrangement)
    squeezed = squeeze(arrangement, Fraction(1, 20))
    assert wiring_from_lines(squeezed) == w

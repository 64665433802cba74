from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from segrec.geom import (
    Point,
    Polyline,
    Segment,
    UnitSegment,
    intersection_points,
    objects_intersect,
    orientation,
    polylines_intersect,
    segments_intersect,
    snap_slope_to_unit_direction,
    unit_direction_from_angle,
    unit_direction_from_parameter,
)

rationals = st.fractions(min_value=-10, max_value=10, max_denominator=12)
points = st.builds(Point, rationals, rationals)


def seg(a, b, c, d):
    return Segment(Point(a, b), Point(c, d))


@pytest.mark.parametrize(
    "p, q, r, expected",
    [
        ((0, 0), (1, 0), (0, 1), 1),
        ((0, 0), (1, 1), (2, 2), 0),
        ((0, 0), (0, 1), (1, 0), -1),
    ],
)
def test_orientation(p, q, r, expected):
    assert orientation(Point.of(p), Point.of(q), Point.of(r)) == expected


@pytest.mark.parametrize(
    "s, t, expected",
    [
        (seg(0, 0, 2, 0), seg(1, -1, 1, 1), True),
        (seg(0, 0, 1, 0), seg(0, 1, 1, 1), False),
        (seg(0, 0, 2, 0), seg(1, 0, 3, 0), True),
        (seg(0, 0, 1, 0), seg(1, 0, 1, 1), True),
        (seg(0, 0, 1, 0), seg(2, 0, 3, 0), False),
        (seg(0, 0, 1, 1), seg(1, 0, "3/4", "1/4"), False),
    ],
)
def test_segments_intersect(s, t, expected):
    assert segments_intersect(s, t) is expected
    assert segments_intersect(t, s) is expected


def test_intersection_points():
    assert intersection_points(seg(0, 0, 2, 0), seg(1, -1, 1, 1)) == [Point(1, 0)]
    assert intersection_points(seg(0, 0, 2, 0), seg(1, 0, 3, 0)) == [Point(1, 0), Point(2, 0)]
    assert intersection_points(seg(0, 0, 1, 0), seg(1, 0, 2, 0)) == [Point(1, 0)]
    assert intersection_points(seg(0, 0, 1, 0), seg(0, 1, 1, 1)) == []


def test_polylines_intersect():
    ell = Polyline(((0, 0), (1, 0), (1, 1)))
    bent = Polyline(((0, 1), ("1/2", "1/2"), (1, 0)))
    far = Polyline(((5, 5), (6, 5), (6, 6)))
    assert polylines_intersect(ell, bent)
    assert not polylines_intersect(ell, far)
    assert polylines_intersect(ell, ell)


def test_polyline_validation():
    assert Polyline(((0, 0), (1, 0), (2, 0))).bends == 1
    with pytest.raises(ValueError):
        Polyline(((0, 0),))
    with pytest.raises(ValueError):
        Polyline(((0, 0), (0, 0), (1, 1)))
    with pytest.raises(ValueError):
        Segment(Point(1, 1), Point(1, 1))


def test_unit_segment():
    s = UnitSegment((0, 0), ("3/5", "4/5"))
    assert s.end == Point(Fraction(3, 5), Fraction(4, 5))
    assert s.slope == Fraction(4, 3)
    assert objects_intersect(s, seg(0, "1/2", 1, "1/2"))
    with pytest.raises(ValueError):
        UnitSegment((0, 0), (1, 1))


@pytest.mark.parametrize(
    "t, expected",
    [(0, (1, 0)), (Fraction(1, 2), (Fraction(3, 5), Fraction(4, 5))), (1, (0, 1))],
)
def test_unit_direction_from_parameter(t, expected):
    assert unit_direction_from_parameter(t) == Point.of(expected)


@pytest.mark.parametrize(
    "slope, deviation, expected",
    [(0, "1/100", (1, 0)), (Fraction(4, 3), 0, ("3/5", "4/5")), (Fraction(-3, 4), 0, ("4/5", "-3/5"))],
)
def test_snap_slope_exact(slope, deviation, expected):
    assert snap_slope_to_unit_direction(slope, deviation) == Point.of(expected)


def test_snap_slope_within_deviation():
    d = snap_slope_to_unit_direction(Fraction(1, 21), Fraction(1, 10000))
    assert d.x * d.x + d.y * d.y == 1
    assert d.x > 0
    assert abs(d.y / d.x - Fraction(1, 21)) <= Fraction(1, 10000)


def test_snap_slope_needs_deviation():
    with pytest.raises(ValueError):
        snap_slope_to_unit_direction(Fraction(1, 21), 0)


@given(st.fractions(min_value=-5, max_value=5, max_denominator=50))
def test_snap_slope_property(slope):
    d = snap_slope_to_unit_direction(slope, Fraction(1, 1000))
    assert d.x * d.x + d.y * d.y == 1
    assert d.x > 0
    assert abs(d.y / d.x - slope) <= Fraction(1, 1000)


@given(st.floats(min_value=-10, max_value=10, allow_nan=False))
def test_unit_direction_from_angle_is_exact(theta):
    d = unit_direction_from_angle(theta)
    assert d.x * d.x + d.y * d.y == 1
    assert d.x >= 0


@given(points, points, points)
def test_orientation_antisymmetric(p, q, r):
    assert orientation(p, q, r) == -orientation(q, p, r)
    assert orientation(p, q, r) == orientation(q, r, p)


@given(points, points, points, points)
def test_segments_intersect_symmetric(a, b, c, d):
    if a == b or c == d:
        return
    s, t = Segment(a, b), Segment(c, d)
    assert segments_intersect(s, t) == segments_intersect(t, s)
    assert segments_intersect(s, t) == bool(intersection_points(s, t))
    for p in intersection_points(s, t):
        assert orientation(a, b, p) == 0
        assert orientation(c, d, p) == 0


@given(points, points)
def test_segment_meets_itself(a, b):
    if a == b:
        return
    assert segments_intersect(Segment(a, b), Segment(b, a))


small_points = st.builds(Point, st.integers(-3, 3), st.integers(-3, 3))


def solved_intersect(a, b, c, d):
    """Intersection test by Cramer's rule on p + u (q - p) = r + v (s - r)."""
    ux, uy = b.x - a.x, b.y - a.y
    vx, vy = d.x - c.x, d.y - c.y
    wx, wy = c.x - a.x, c.y - a.y
    det = ux * vy - uy * vx
    if det != 0:
        u = Fraction(wx * vy - wy * vx, det)
        v = Fraction(wx * uy - wy * ux, det)
        return 0 <= u <= 1 and 0 <= v <= 1
    if wx * uy - wy * ux != 0:
        return False
    length = ux * ux + uy * uy
    t0 = Fraction(wx * ux + wy * uy, length)
    t1 = Fraction((d.x - a.x) * ux + (d.y - a.y) * uy, length)
    return max(min(t0, t1), 0) <= min(max(t0, t1), 1)


@settings(max_examples=1000)
@given(small_points, small_points, small_points, small_points)
def test_segments_intersect_matches_linear_solve(a, b, c, d):
    if a == b or c == d:
        return
    assert segments_intersect(Segment(a, b), Segment(c, d)) is solved_intersect(a, b, c, d)

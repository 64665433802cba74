"""
Exact rational geometry: points, unit segments, segments, polylines and the
predicates deciding whether two of them share a point.

All coordinates are :class:`fractions.Fraction`; no predicate in this module
ever looks at a float.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import List, Sequence, Tuple, Union

from segrec.utilities import TypePair, TypeScalar, to_rational, validate_point


@dataclass(frozen=True, order=True)
class Point:
    """A point in the plane with exact rational coordinates."""

    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", to_rational(self.x))
        object.__setattr__(self, "y", to_rational(self.y))

    @classmethod
    def of(cls, pair: Union["Point", TypePair]) -> "Point":
        if isinstance(pair, Point):
            return pair
        return cls(*validate_point(pair))

    def __add__(self, other: "Point") -> "Point":
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point") -> "Point":
        return Point(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "Point":
        return Point(-self.x, -self.y)

    def scale(self, factor: TypeScalar) -> "Point":
        factor = to_rational(factor)
        return Point(self.x * factor, self.y * factor)

    def cross(self, other: "Point") -> Fraction:
        return self.x * other.y - self.y * other.x

    def dot(self, other: "Point") -> Fraction:
        return self.x * other.x + self.y * other.y

    def to_tuple(self) -> Tuple[Fraction, Fraction]:
        return self.x, self.y


@dataclass(frozen=True)
class Segment:
    """A closed straight segment between two distinct points."""

    p: Point
    q: Point

    def __post_init__(self):
        object.__setattr__(self, "p", Point.of(self.p))
        object.__setattr__(self, "q", Point.of(self.q))
        if self.p == self.q:
            raise ValueError(
                "Segment endpoints must differ, got {!r} twice.".format(self.p)
            )

    @property
    def points(self) -> Tuple[Point, Point]:
        return self.p, self.q

    def segments(self) -> List["Segment"]:
        return [self]

    def point_at(self, t: TypeScalar) -> Point:
        return self.p + (self.q - self.p).scale(t)


@dataclass(frozen=True)
class UnitSegment:
    """A segment of exact length one, stored as anchor plus unit direction.

    The segment is the convex hull of ``anchor`` and ``anchor + direction``.
    """

    anchor: Point
    direction: Point

    def __post_init__(self):
        object.__setattr__(self, "anchor", Point.of(self.anchor))
        object.__setattr__(self, "direction", Point.of(self.direction))
        d = self.direction
        if d.x * d.x + d.y * d.y != 1:
            raise ValueError(
                "Direction of a unit segment must lie on the unit circle, "
                "got {!r} with squared length {}.".format(d, d.x * d.x + d.y * d.y)
            )

    @property
    def end(self) -> Point:
        return self.anchor + self.direction

    @property
    def points(self) -> Tuple[Point, Point]:
        return self.anchor, self.end

    @property
    def slope(self) -> Fraction:
        if self.direction.x == 0:
            raise ZeroDivisionError("Vertical unit segment has no slope.")
        return self.direction.y / self.direction.x

    def as_segment(self) -> Segment:
        return Segment(self.anchor, self.end)

    def segments(self) -> List[Segment]:
        return [self.as_segment()]


@dataclass(frozen=True)
class Polyline:
    """A polyline through ``points``; ``len(points) - 2`` is its bend count.

    Collinear consecutive triples are allowed, so a straight object padded
    with interior points is a valid k-bend polyline.
    """

    points: Tuple[Point, ...]

    def __post_init__(self):
        pts = tuple(Point.of(p) for p in self.points)
        if len(pts) < 2:
            raise ValueError(
                "A polyline needs at least two points, got {!r}.".format(pts)
            )
        for a, b in zip(pts, pts[1:]):
            if a == b:
                raise ValueError(
                    "Consecutive polyline points must differ, got {!r} twice.".format(a)
                )
        object.__setattr__(self, "points", pts)

    @property
    def bends(self) -> int:
        return len(self.points) - 2

    def segments(self) -> List[Segment]:
        return [Segment(a, b) for a, b in zip(self.points, self.points[1:])]


GeometricObject = Union[UnitSegment, Segment, Polyline]


def orientation(p: Point, q: Point, r: Point) -> int:
    """Sign of the cross product (q - p) x (r - p); +1 means counterclockwise."""
    det = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
    return (det > 0) - (det < 0)


def _within(a: Fraction, b: Fraction, c: Fraction) -> bool:
    return min(a, b) <= c <= max(a, b)


def on_segment(p: Point, q: Point, r: Point) -> bool:
    """Whether r lies on the closed segment pq, given that p, q, r are collinear."""
    return _within(p.x, q.x, r.x) and _within(p.y, q.y, r.y)


def _boxes_overlap(s: Segment, t: Segment) -> bool:
    return (
        max(s.p.x, s.q.x) >= min(t.p.x, t.q.x)
        and max(t.p.x, t.q.x) >= min(s.p.x, s.q.x)
        and max(s.p.y, s.q.y) >= min(t.p.y, t.q.y)
        and max(t.p.y, t.q.y) >= min(s.p.y, s.q.y)
    )


def segments_intersect(s: Segment, t: Segment) -> bool:
    """Whether two closed segments share at least one point.

    Touching endpoints and collinear overlap count as intersecting.
    """
    if not _boxes_overlap(s, t):
        return False
    o1 = orientation(s.p, s.q, t.p)
    o2 = orientation(s.p, s.q, t.q)
    o3 = orientation(t.p, t.q, s.p)
    o4 = orientation(t.p, t.q, s.q)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    if o1 == 0 and on_segment(s.p, s.q, t.p):
        return True
    if o2 == 0 and on_segment(s.p, s.q, t.q):
        return True
    if o3 == 0 and on_segment(t.p, t.q, s.p):
        return True
    if o4 == 0 and on_segment(t.p, t.q, s.q):
        return True
    return False


def intersection_points(s: Segment, t: Segment) -> List[Point]:
    """The common points of two closed segments.

    Returns an empty list when they are disjoint, a single point for a unique
    common point, and the two endpoints of the shared piece when they overlap
    collinearly.
    """
    if not segments_intersect(s, t):
        return []
    d1 = s.q - s.p
    d2 = t.q - t.p
    denom = d1.cross(d2)
    if denom != 0:
        u = (t.p - s.p).cross(d2) / denom
        return [s.point_at(u)]
    candidates = sorted(
        {pt for pt in (s.p, s.q, t.p, t.q) if on_segment(s.p, s.q, pt) and on_segment(t.p, t.q, pt)}
    )
    if len(candidates) == 1:
        return candidates
    return [candidates[0], candidates[-1]]


def _pieces(obj: GeometricObject) -> List[Segment]:
    return obj.segments()


def objects_intersect(a: GeometricObject, b: GeometricObject) -> bool:
    """Whether any constituent segment of ``a`` meets one of ``b``."""
    sa = _pieces(a)
    sb = _pieces(b)
    if not _boxes_overlap(_hull(sa), _hull(sb)):
        return False
    return any(segments_intersect(s, t) for s in sa for t in sb)


def polylines_intersect(a: Polyline, b: Polyline) -> bool:
    return objects_intersect(a, b)


def _hull(segments: Sequence[Segment]) -> Segment:
    xs = [c for s in segments for c in (s.p.x, s.q.x)]
    ys = [c for s in segments for c in (s.p.y, s.q.y)]
    return Segment(Point(min(xs), min(ys)), Point(max(xs), max(ys)))


def object_points(obj: GeometricObject) -> Tuple[Point, ...]:
    if isinstance(obj, Polyline):
        return obj.points
    return tuple(obj.points)


def unit_direction_from_parameter(t: TypeScalar) -> Point:
    """Rational point on the unit circle from the tangent half-angle ``t``."""
    t = to_rational(t)
    denom = 1 + t * t
    return Point((1 - t * t) / denom, 2 * t / denom)


def _exact_unit_direction(slope: Fraction) -> Union[Point, None]:
    p, q = slope.numerator, slope.denominator
    r2 = p * p + q * q
    r = isqrt(r2)
    if r * r != r2:
        return None
    return Point(Fraction(q, r), Fraction(p, r))


def _slope_of_parameter(t: Fraction) -> Fraction:
    return 2 * t / (1 - t * t)


def snap_slope_to_unit_direction(slope: TypeScalar, max_deviation: TypeScalar) -> Point:
    """Rational unit direction with positive x whose slope is within
    ``max_deviation`` of ``slope``.

    Exact hits (slope 0, 3/4, 4/3, ...) are returned with zero deviation;
    otherwise the tangent half-angle parameter is bisected on (-1, 1), where
    the slope 2t / (1 - t^2) is strictly increasing.
    """
    slope = to_rational(slope)
    max_deviation = to_rational(max_deviation)
    exact = _exact_unit_direction(slope)
    if exact is not None:
        return exact
    if max_deviation <= 0:
        raise ValueError(
            "max_deviation must be positive when no exact unit direction "
            "exists for slope {!r}, got {!r}.".format(slope, max_deviation)
        )
    lo, hi = Fraction(-1), Fraction(1)
    while True:
        mid = (lo + hi) / 2
        current = _slope_of_parameter(mid)
        if abs(current - slope) <= max_deviation:
            return unit_direction_from_parameter(mid)
        if current < slope:
            lo = mid
        else:
            hi = mid


def unit_direction_from_angle(theta: float, max_denominator: int = 1 << 30) -> Point:
    """Rational unit direction close to the float angle ``theta``.

    Angles are folded into (-pi/2, pi/2] first; a unit segment centred on a
    point is the same set for ``d`` and ``-d``.
    """
    folded = math.remainder(theta, math.pi)
    if folded <= -math.pi / 2:
        folded += math.pi
    t = Fraction(math.tan(folded / 2)).limit_denominator(max_denominator)
    return unit_direction_from_parameter(t)

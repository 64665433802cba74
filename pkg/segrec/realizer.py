"""
Exact unit-segment realizations of the reduction graph.

The construction squeezes a line arrangement into a small square, snaps every
slope to a rational unit direction and then places important segments,
probes, connectors and a sawtooth cycle around them. The only acceptance test
is exact: the intersection graph of the placed objects must equal the
reduction graph. On mismatch the tube spacing and clearances are halved and
the objects are placed again.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from segrec.arrangement import (
    CrossingOrders,
    Line,
    LineArrangement,
    WiringDiagram,
    crossing_orders,
    line_crossing_orders,
    squeeze,
    wiring_from_lines,
)
from segrec.geom import (
    GeometricObject,
    Point,
    UnitSegment,
    objects_intersect,
    snap_slope_to_unit_direction,
)
from segrec.graphs import GraphDiff, Kind, VertexLabel, graphs_equal, intersection_graph
from segrec.reduction import ReductionArtifact, unit_right_arc
from segrec.structure import DegenerateRealization, check_order_lemma
from segrec.utilities import to_rational

logger = logging.getLogger(__name__)

MAX_A = Fraction(1, 20)
# Halvings tried while fitting the probe tubes or snapping slopes.
MAX_HALVINGS = 64
# Deviation allowed when snapping the closing arcs towards their midpoint.
CLOSING_DEVIATION = Fraction(1, 1000)
# Heights above the corner midpoint tried for the middle closing arcs.
CLOSING_LIFTS = (Fraction(1, 8), Fraction(1, 4), Fraction(1, 16))


class WiringMismatch(ValueError):
    """Raised when a line arrangement does not match a reduction's wiring."""


class RefinementExhausted(ValueError):
    """Raised when no refine round produced the expected intersection graph.

    ``diff`` is the difference found in the last round.
    """

    def __init__(self, message: str, diff: Optional[GraphDiff] = None):
        self.diff = diff
        if diff is not None and not diff.empty:
            message = "{}\n{}".format(message, diff.report())
        super().__init__(message)


@dataclass(frozen=True)
class RealizerParams:
    """Tuning of the constructive realizers.

    Parameters
    ----------
    a: rational, default 1/20
        Squeeze bound: important slopes lie in [-a, a] and important
        crossings in the open square (-a, a)^2. At most 1/20.
    rho: rational, default 1/1000
        Spacing between consecutive probe tubes around a pseudoline.
    eta: rational, default 1/100
        Clearance between connector tips and the cycle.
    max_refine: int, default 12
        Number of place-and-verify rounds before giving up.
    """

    a: Fraction = MAX_A
    rho: Fraction = Fraction(1, 1000)
    eta: Fraction = Fraction(1, 100)
    max_refine: int = 12

    def __post_init__(self):
        for name in ("a", "rho", "eta"):
            value = to_rational(getattr(self, name))
            if value <= 0:
                raise ValueError("{} must be positive, got {!r}.".format(name, value))
            object.__setattr__(self, name, value)
        if self.a > MAX_A:
            raise ValueError("a must be at most 1/20, got {!r}.".format(self.a))
        if not isinstance(self.max_refine, int) or self.max_refine < 1:
            raise ValueError("max_refine must be a positive integer, got {!r}.".format(self.max_refine))

    def check_for(self, n: int) -> None:
        if self.rho * (n - 1) >= self.a / 4:
            raise ValueError(
                "rho * (n - 1) must stay below a / 4, got rho={} for n={} and a={}.".format(
                    self.rho, n, self.a
                )
            )


@dataclass
class Realization:
    """Geometric objects keyed by vertex label.

    ``kind`` is ``"unit_segments"`` or ``"polylines"``; polylines carry their
    bend count ``k``.
    """

    kind: str
    objects: Dict[VertexLabel, GeometricObject]
    k: Optional[int] = None

    def __len__(self) -> int:
        return len(self.objects)


@dataclass(frozen=True)
class TubeLine:
    """A line y = slope * x + intercept carrying a pseudoline or probe."""

    slope: Fraction
    intercept: Fraction

    def y_at(self, x: Fraction) -> Fraction:
        return self.slope * x + self.intercept

    def at(self, x: Fraction) -> Point:
        return Point(x, self.y_at(x))

    def mirrored(self) -> "TubeLine":
        return TubeLine(-self.slope, self.intercept)


def check_matches(arrangement: LineArrangement, wiring: WiringDiagram) -> None:
    """Raise WiringMismatch unless ``arrangement`` has the crossing orders of ``wiring``."""
    mine = crossing_orders(wiring_from_lines(arrangement))
    if mine != crossing_orders(wiring):
        raise WiringMismatch(
            "The line arrangement has crossing orders {} but the reduction "
            "was built for {}.".format(mine, crossing_orders(wiring))
        )


def _fits(arrangement: LineArrangement, a: Fraction, expected: CrossingOrders) -> bool:
    try:
        if line_crossing_orders(arrangement) != expected:
            return False
        points = arrangement.crossings().values()
    except ValueError:
        return False
    if any(abs(line.slope) > a for line in arrangement.lines):
        return False
    return all(abs(p.x) < a and abs(p.y) < a for p in points)


def snap_tilted(slope: Fraction, deviation: Fraction) -> Point:
    """Rational unit direction within ``deviation`` of ``slope`` that is never
    horizontal.

    Connectors share the direction of their host and must cross the
    horizontal sawtooth arcs in a single point.
    """
    direction = snap_slope_to_unit_direction(slope, deviation)
    if direction.y != 0:
        return direction
    target = deviation / 2 if slope >= 0 else -deviation / 2
    return snap_slope_to_unit_direction(target, deviation / 4)


def snap_arrangement(
    arrangement: LineArrangement, a: Fraction
) -> Tuple[Dict[int, Line], Dict[int, Point]]:
    """Squeeze to a / 2 and snap every slope to a tilted rational unit direction.

    Intercepts are kept; the snapping deviation is halved until the snapped
    lines keep the crossing orders and the crossings stay inside (-a, a)^2.
    """
    squeezed = squeeze(arrangement, a / 2).labelled()
    expected = line_crossing_orders(LineArrangement(tuple(squeezed.values())))
    deviation = a / 64
    for _ in range(MAX_HALVINGS):
        dirs = {i: snap_tilted(line.slope, deviation) for i, line in squeezed.items()}
        snapped = {i: Line(d.y / d.x, squeezed[i].intercept) for i, d in dirs.items()}
        if _fits(LineArrangement(tuple(snapped[i] for i in sorted(snapped))), a, expected):
            return snapped, dirs
        logger.debug("slope snapping with deviation %s broke the arrangement", deviation)
        deviation /= 2
    raise WiringMismatch("Could not snap the arrangement to rational unit directions.")


def tube_offset(host: VertexLabel, rho: Fraction, twin_offset: Fraction = Fraction(0)) -> Tuple[int, Fraction]:
    """Pseudoline index and vertical offset of the tube carrying ``host``."""
    if host.kind is Kind.PSEUDOLINE:
        return host.index[0], Fraction(0)
    if host.kind is Kind.TWIN:
        return host.index[0], twin_offset
    if host.kind is Kind.PROBE:
        sign = 1 if host.side == "above" else -1
        return host.index[0], sign * host.depth * rho
    raise ValueError("{} is not carried by a tube.".format(host))


def crossing_clusters(
    lines: Dict[int, Line], rho: Fraction, n: int
) -> Dict[Tuple[int, int], Tuple[Fraction, Fraction]]:
    """x-interval holding every crossing between the tubes of i and j."""
    out = {}
    for i in lines:
        for j in lines:
            if i < j:
                li, lj = lines[i], lines[j]
                dm = li.slope - lj.slope
                x = (lj.intercept - li.intercept) / dm
                spread = 2 * (n - 1) * rho / abs(dm)
                out[(i, j)] = out[(j, i)] = (x - spread, x + spread)
    return out


def clusters_fit(
    clusters: Dict[Tuple[int, int], Tuple[Fraction, Fraction]],
    orders: CrossingOrders,
    a: Fraction,
) -> bool:
    """Clusters inside (-2a, 2a), ordered and disjoint along every pseudoline."""
    if any(lo <= -2 * a or hi >= 2 * a for lo, hi in clusters.values()):
        return False
    for i, seq in orders.items():
        for m, m2 in zip(seq, seq[1:]):
            if clusters[(i, m)][1] >= clusters[(i, m2)][0]:
                return False
    return True


def settle_rho(lines: Dict[int, Line], orders: CrossingOrders, rho: Fraction, a: Fraction) -> Fraction:
    n = len(lines)
    for _ in range(MAX_HALVINGS):
        if clusters_fit(crossing_clusters(lines, rho, n), orders, a):
            return rho
        rho /= 2
    raise DegenerateRealization("Probe tubes do not separate for any tried spacing.")


def probe_right_ends(
    orders: CrossingOrders,
    clusters: Dict[Tuple[int, int], Tuple[Fraction, Fraction]],
    a: Fraction,
) -> Dict[Tuple[int, int], Fraction]:
    """x-coordinate where the depth-t probe of pseudoline i ends.

    It lies between the t-th and the (t+1)-th crossing cluster along i, or
    a / 4 past the last cluster.
    """
    out = {}
    for i, seq in orders.items():
        for t in range(1, len(seq) + 1):
            reached = clusters[(i, seq[t - 1])][1]
            if t < len(seq):
                out[(i, t)] = (reached + clusters[(i, seq[t])][0]) / 2
            else:
                out[(i, t)] = reached + a / 4
    return out


def unit_on_line(line: TubeLine, direction: Point, left_x: Fraction) -> UnitSegment:
    return UnitSegment(line.at(left_x), direction)


def mirror_unit(segment: UnitSegment) -> UnitSegment:
    """Reflect a unit segment in the y-axis, keeping a positive x-direction."""
    a, u = segment.anchor, segment.direction
    return UnitSegment(Point(-a.x - u.x, a.y + u.y), Point(u.x, -u.y))


@dataclass
class Sawtooth:
    """Horizontal arcs crossing connector tips, joined by rising arcs.

    Built for connectors whose left tips sit on the column ``x_col``; the
    right side is built in mirrored coordinates.
    """

    horizontal: List[UnitSegment]
    rising: List[UnitSegment]
    heights: List[Fraction]
    min_gap: Fraction


def build_sawtooth(tips: Sequence[TubeLine], x_col: Fraction, eta: Fraction, a: Fraction) -> Sawtooth:
    at_col = [t.y_at(x_col) for t in tips]
    gaps0 = [u - v for u, v in zip(at_col, at_col[1:])]
    if any(g <= 0 for g in gaps0):
        raise DegenerateRealization("Connector tips are not ordered top to bottom.")
    e = min([eta, a / 4] + [g / 2 for g in gaps0])
    heights = [t.y_at(x_col + e) for t in tips]
    gaps = [u - v for u, v in zip(heights, heights[1:])]
    x0 = x_col + 2 * e - 1
    horizontal = [UnitSegment(Point(x0, y), Point(1, 0)) for y in heights]
    if not gaps:
        return Sawtooth(horizontal, [], heights, a)
    g_min, g_max = min(gaps), max(gaps)
    u = snap_slope_to_unit_direction(4 * g_max, g_max / 8)
    sigma = u.y / u.x
    p = x0 + g_min / (2 * sigma)
    rising = []
    previous = g_min
    for k, g in enumerate(gaps):
        x_end = p + (g + previous / 2) / sigma
        left = x_end - u.x
        rising.append(UnitSegment(Point(left, heights[k + 1] + sigma * (left - p)), u))
        previous = g
    return Sawtooth(horizontal, rising, heights, g_min)


def _closing_corner(saw: Sawtooth, x_col: Fraction, top: bool) -> Tuple[UnitSegment, Point]:
    """First closing arc leaving the top or bottom horizontal arc, and the
    point where the next closing arc must cross it.

    The arc starts a quarter of the smallest tip gap inside the outermost
    horizontal arc, so the top and bottom corners of one side stay at least
    half a gap apart and diverge.
    """
    if len(saw.heights) < 2:
        raise DegenerateRealization("A closing route needs at least two connector tips per side.")
    s = 1 if top else -1
    y = saw.heights[0] if top else saw.heights[-1]
    direction = Point(Fraction(4, 5), s * Fraction(3, 5))
    arc = UnitSegment(Point(x_col - Fraction(1, 4), y - s * saw.min_gap / 4), direction)
    return arc, arc.end - direction.scale(Fraction(1, 10))


def closing_path(
    left: Sawtooth,
    right: Sawtooth,
    x_col: Fraction,
    top: bool,
    lift: Fraction = Fraction(1, 8),
) -> List[UnitSegment]:
    """Four arcs joining the left and right sawtooth, listed left to right.

    The two middle arcs meet above (or below) the midpoint of the corners by
    ``lift``.
    """
    s = 1 if top else -1
    first, p = _closing_corner(left, x_col, top)
    mirrored_last, q_mirrored = _closing_corner(right, x_col, top)
    last = mirror_unit(mirrored_last)
    q = Point(-q_mirrored.x, q_mirrored.y)
    m = Point(0, (p.y + q.y) / 2 + s * lift)
    u2 = snap_slope_to_unit_direction((m.y - p.y) / (m.x - p.x), CLOSING_DEVIATION)
    u3 = snap_slope_to_unit_direction((q.y - m.y) / (q.x - m.x), CLOSING_DEVIATION)
    second = UnitSegment(p - u2.scale(Fraction(1, 10)), u2)
    third = UnitSegment(q - u3.scale(Fraction(9, 10)), u3)
    return [first, second, third, last]


def _unit_objects(
    art: ReductionArtifact,
    lines: Dict[int, Line],
    dirs: Dict[int, Point],
    rho: Fraction,
    eta: Fraction,
    a: Fraction,
) -> Dict[VertexLabel, GeometricObject]:
    n = art.n
    orders = crossing_orders(art.wiring)
    ends = probe_right_ends(orders, crossing_clusters(lines, rho, n), a)
    x_left, x_right = -(1 + 4 * a), 1 + 4 * a

    def tube(host: VertexLabel) -> Tuple[TubeLine, Point]:
        i, offset = tube_offset(host, rho)
        return TubeLine(lines[i].slope, lines[i].intercept + offset), dirs[i]

    objects: Dict[VertexLabel, GeometricObject] = {}
    for v in art.roles["important"]:
        line, u = tube(v)
        objects[v] = unit_on_line(line, u, -u.x / 2)
    for v in art.roles["probes"]:
        line, u = tube(v)
        objects[v] = unit_on_line(line, u, ends[(v.index[0], v.depth)] - u.x)
    for c in art.roles["connectors_left"]:
        line, u = tube(c.host)
        objects[c] = unit_on_line(line, u, x_left)
    for c in art.roles["connectors_right"]:
        line, u = tube(c.host)
        objects[c] = unit_on_line(line, u, x_right - u.x)

    left_tips = [tube(h)[0] for h in art.left_boundary_order]
    right_tips = [tube(h)[0].mirrored() for h in art.right_boundary_order]
    left = build_sawtooth(left_tips, x_left, eta, a)
    right = build_sawtooth(right_tips, x_left, eta, a)
    d_left, d_right = len(left_tips), len(right_tips)
    d = d_left + d_right
    for k, arc in enumerate(left.horizontal, start=1):
        objects[VertexLabel.cycle(2 * k - 1)] = arc
    for k, arc in enumerate(left.rising, start=1):
        objects[VertexLabel.cycle(2 * k)] = arc
    for j, arc in enumerate(right.horizontal, start=1):
        objects[VertexLabel.cycle(unit_right_arc(j, d_left, d_right))] = mirror_unit(arc)
    for j, arc in enumerate(right.rising, start=1):
        objects[VertexLabel.cycle(unit_right_arc(j, d_left, d_right) - 1)] = mirror_unit(arc)
    routes = (
        (False, [VertexLabel.cycle(2 * d_left + offset) for offset in range(4)]),
        (True, [VertexLabel.cycle(2 * d + 6 - offset) for offset in range(4)]),
    )
    for top, labels in routes:
        objects.update(_route(art, objects, left, right, x_left, top, labels))
    return objects


def route_clashes(
    art: ReductionArtifact,
    objects: Dict[VertexLabel, GeometricObject],
    labels: Sequence[VertexLabel],
) -> List[str]:
    """Pairs involving ``labels`` whose contact disagrees with the reduction graph."""
    clashes = []
    for c in labels:
        for v in sorted(objects):
            if v != c and objects_intersect(objects[c], objects[v]) != art.graph.has_edge(c, v):
                clashes.append("{} -- {}".format(c, v))
    return clashes


def _route(
    art: ReductionArtifact,
    objects: Dict[VertexLabel, GeometricObject],
    left: Sawtooth,
    right: Sawtooth,
    x_col: Fraction,
    top: bool,
    labels: Sequence[VertexLabel],
) -> Dict[VertexLabel, GeometricObject]:
    side = "top" if top else "bottom"
    clashes: List[str] = []
    for lift in CLOSING_LIFTS:
        arcs = dict(zip(labels, closing_path(left, right, x_col, top, lift)))
        clashes = route_clashes(art, {**objects, **arcs}, labels)
        if not clashes:
            return arcs
        logger.debug("%s closing route with lift %s clashes: %s", side, lift, "; ".join(clashes))
    raise DegenerateRealization(
        "No {} closing route clears the placed objects: {}".format(side, "; ".join(clashes))
    )


def _order_holds(art: ReductionArtifact, objects: Dict[VertexLabel, GeometricObject]) -> bool:
    try:
        return check_order_lemma(art.graph, art.cycle_order, art.order_connectors, objects)
    except DegenerateRealization as e:
        logger.debug("order check degenerate: %s", e)
        return False


def _check_important(objects: Dict[VertexLabel, GeometricObject], art: ReductionArtifact, a: Fraction) -> None:
    segments = [objects[v] for v in art.roles["important"]]
    for seg in segments:
        if abs(seg.slope) > a:
            raise DegenerateRealization("Important segment slope {} exceeds {}.".format(seg.slope, a))
    for i, s in enumerate(segments):
        for t in segments[i + 1:]:
            ls = TubeLine(s.slope, s.anchor.y - s.slope * s.anchor.x)
            lt = TubeLine(t.slope, t.anchor.y - t.slope * t.anchor.x)
            x = (lt.intercept - ls.intercept) / (ls.slope - lt.slope)
            if not (abs(x) < a and abs(ls.y_at(x)) < a):
                raise DegenerateRealization("Important crossing at x={} leaves the square.".format(x))


def realize_unit(
    arrangement: LineArrangement,
    art: ReductionArtifact,
    params: Optional[RealizerParams] = None,
) -> Realization:
    """Exact unit-segment realization of a unit reduction graph."""
    params = params or RealizerParams()
    if art.kind != "unit":
        raise ValueError("realize_unit needs a unit reduction, got {!r}.".format(art.kind))
    n = art.n
    if n < 2:
        raise ValueError("Unit realizations need at least two pseudolines, got n={}.".format(n))
    params.check_for(n)
    check_matches(arrangement, art.wiring)
    lines, dirs = snap_arrangement(arrangement, params.a)
    orders = crossing_orders(art.wiring)
    rho, eta = params.rho, params.eta
    diff: Optional[GraphDiff] = None
    for round_ in range(1, params.max_refine + 1):
        rho = settle_rho(lines, orders, rho, params.a)
        try:
            objects = _unit_objects(art, lines, dirs, rho, eta, params.a)
        except DegenerateRealization as e:
            logger.info("refine round %d could not place the cycle: %s", round_, e)
            rho, eta = rho / 2, eta / 2
            continue
        ok, diff = graphs_equal(art.graph, intersection_graph(objects))
        if ok and _order_holds(art, objects):
            _check_important(objects, art, params.a)
            logger.info("unit realization found in round %d (rho=%s, eta=%s)", round_, rho, eta)
            return Realization("unit_segments", objects)
        logger.info("refine round %d failed, halving rho and eta", round_)
        if diff is not None and not diff.empty:
            logger.debug("refine round %d diff:\n%s", round_, diff.report())
        rho, eta = rho / 2, eta / 2
    raise RefinementExhausted(
        "No unit realization after {} refine rounds.".format(params.max_refine), diff
    )

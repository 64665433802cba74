"""
Exact k-bend polyline realizations of the polyline reduction graph.

The canvas holds the vertically mirrored, squeezed line arrangement drawn
with straight segments; twins run parallel just below their pseudolines.
Vertical zigzag chains sit at ``chain_x(i)``; each pseudoline spends its k
bends weaving through the lanes of the chains C_2 .. C_{k+1} while its twin
stays straight, then the twin spends its k bends on the remaining chains.
"""

import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from segrec.arrangement import LineArrangement, crossing_orders, squeeze
from segrec.geom import GeometricObject, Point, Polyline, intersection_points
from segrec.graphs import Kind, VertexLabel, graphs_equal, intersection_graph
from segrec.realizer import (
    MAX_HALVINGS,
    Realization,
    RealizerParams,
    RefinementExhausted,
    TubeLine,
    check_matches,
    clusters_fit,
    crossing_clusters,
    probe_right_ends,
    tube_offset,
)
from segrec.reduction import ReductionArtifact, chain_length
from segrec.structure import DegenerateRealization, check_order_lemma

logger = logging.getLogger(__name__)

CANVAS_START = Fraction(-1, 2)
LEFT_CONNECTOR_END = Fraction(-1, 4)
# Clearance between the canvas content and the top and bottom frame chains.
FRAME_MARGIN = Fraction(1, 2)
CHAIN_OVERSHOOT = Fraction(5, 4)


def chain_x(i: int) -> Fraction:
    """x-coordinate of frame chain i."""
    return Fraction(-1) if i == 1 else Fraction(1, 2) + (i - 2)


def bend_x(i: int) -> Fraction:
    """x-coordinate of the bend column between chains i and i + 1."""
    return chain_x(i) + Fraction(1, 4)


def pad(points: Sequence[Point], k: int) -> Polyline:
    """A polyline through ``points`` with exactly k interior points.

    Missing interior points are added evenly along the first segment.
    """
    pts = list(points)
    missing = k - (len(pts) - 2)
    if missing < 0:
        raise ValueError("{} points leave more than k={} interior points.".format(len(pts), k))
    a, b = pts[0], pts[1]
    extra = [a + (b - a).scale(Fraction(i, missing + 1)) for i in range(1, missing + 1)]
    return Polyline(tuple([a] + extra + pts[1:]))


def height_at(points: Sequence[Point], x: Fraction) -> Fraction:
    """Height of an x-monotone polyline at x, extending its end segments."""
    for a, b in zip(points, points[1:]):
        if a.x <= x <= b.x:
            break
    else:
        a, b = (points[0], points[1]) if x < points[0].x else (points[-2], points[-1])
    return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x)


def _segment(line: TubeLine, x0: Fraction, x1: Fraction) -> List[Point]:
    return [line.at(x0), line.at(x1)]


def _weave_offset(i: int) -> Fraction:
    """Offset of a weaving pseudoline at bend column i, in units of delta."""
    if i == 2:
        return Fraction(0)
    return Fraction(1) if i % 2 == 0 else Fraction(-3)


def weave_pseudoline(line: TubeLine, k: int, delta: Fraction) -> List[Point]:
    """Pseudoline path: bends at columns 2..k+1, then straight to the last chain."""
    pts = [line.at(CANVAS_START)]
    pts += [
        Point(bend_x(i), line.y_at(bend_x(i)) + _weave_offset(i) * delta)
        for i in range(2, k + 2)
    ]
    aim = Point(bend_x(k + 2), line.y_at(bend_x(k + 2)) + _weave_offset(k + 2) * delta)
    end_x = chain_x(2 * k + 2) - Fraction(1, 16)
    pts.append(Point(end_x, height_at([pts[-1], aim], end_x)))
    return pts


def weave_twin(line: TubeLine, partner: Sequence[Point], k: int, delta: Fraction) -> List[Point]:
    """Twin path: straight below its pseudoline, then bends at columns k+2..2k+1."""
    below = TubeLine(line.slope, line.intercept - delta)
    pts = [below.at(CANVAS_START), below.at(bend_x(k + 2))]
    for i in range(k + 3, 2 * k + 2):
        x = bend_x(i)
        sign = 1 if i % 2 else -1
        pts.append(Point(x, height_at(partner, x) + sign * 2 * delta))
    last = bend_x(2 * k + 2)
    aim = Point(last, height_at(partner, last) - 2 * delta)
    end_x = chain_x(2 * k + 2) - Fraction(1, 16)
    pts.append(Point(end_x, height_at([pts[-1], aim], end_x)))
    return pts


def zigzag_chain(
    x: Fraction, crossers: Sequence[Fraction], y_top: Fraction, y_bottom: Fraction, w: Fraction
) -> List[List[Point]]:
    """Arcs of a vertical chain; the r-th crosser height lies inside arc 2r.

    Corners alternate between x + w and x - w; every crosser gets a band of a
    third of its smaller neighboring gap on both sides.
    """
    bounds = [y_top] + list(crossers) + [y_bottom]
    breaks = [y_top + CHAIN_OVERSHOOT]
    for r in range(1, len(bounds) - 1):
        h = bounds[r]
        if not bounds[r - 1] > h > bounds[r + 1]:
            raise DegenerateRealization("Chain crossers at x={} are not ordered.".format(x))
        margin = min(bounds[r - 1] - h, h - bounds[r + 1]) / 3
        breaks += [h + margin, h - margin]
    breaks.append(y_bottom - CHAIN_OVERSHOOT)
    corners = [Point(x + (w if r % 2 == 0 else -w), b) for r, b in enumerate(breaks)]
    return [[a, b] for a, b in zip(corners, corners[1:])]


def _link_arcs(
    left_x: Fraction, right_x: Fraction, base: Fraction, w: Fraction, s: int
) -> Tuple[List[Point], List[Point]]:
    """The two arcs joining the ends of consecutive chains; s = 1 on top."""
    mid = (left_x + right_x) / 2
    first = [Point(left_x - 2 * w, base + s), Point(mid + Fraction(1, 8), base)]
    second = [Point(mid - Fraction(1, 8), base), Point(right_x + 2 * w, base + s * Fraction(1, 4))]
    return first, second


def _pair_gaps_fit(lines: Dict[int, TubeLine], k: int, delta: Fraction) -> bool:
    x = chain_x(2)
    ys = [lines[j].y_at(x) for j in sorted(lines)]
    return all(u - v > 2 * (4 * k + 10) * delta for u, v in zip(ys, ys[1:]))


def _polyline_objects(
    art: ReductionArtifact, lines: Dict[int, TubeLine], rho: Fraction, a: Fraction
) -> Dict[VertexLabel, GeometricObject]:
    n, k = art.n, art.k
    delta = rho / 2
    w = delta / 8
    orders = crossing_orders(art.wiring)
    ends = probe_right_ends(orders, crossing_clusters({j: l for j, l in lines.items()}, rho, n), a)
    last = 2 * k + 2
    x_last = chain_x(last)

    def tube(host: VertexLabel) -> TubeLine:
        j, offset = tube_offset(host, rho, -delta)
        return TubeLine(lines[j].slope, lines[j].intercept + offset)

    paths: Dict[VertexLabel, List[Point]] = {}
    for j in range(1, n + 1):
        p = weave_pseudoline(lines[j], k, delta)
        paths[VertexLabel.pseudoline(j)] = p
        paths[VertexLabel.twin(j)] = weave_twin(lines[j], p, k, delta)
    for v in art.roles["probes"]:
        paths[v] = _segment(tube(v), CANVAS_START, ends[(v.index[0], v.depth)])
    for c in art.roles["connectors_left"]:
        paths[c] = _segment(tube(c.host), chain_x(1) - w - Fraction(1, 8), LEFT_CONNECTOR_END)
    for c in art.roles["connectors_right"]:
        host = paths[c.host]
        x0, x1 = x_last - Fraction(1, 8), x_last + w + Fraction(1, 8)
        paths[c] = [Point(x0, height_at(host, x0)), Point(x1, height_at(host, x1))]

    ys = [pt.y for pts in paths.values() for pt in pts]
    y_top, y_bottom = max(ys) + FRAME_MARGIN, min(ys) - FRAME_MARGIN

    x1 = chain_x(1)
    crossers = {1: [tube(c.host).y_at(x1) for c in art.roles["connectors_left"]]}
    for i in range(2, last + 1):
        heights = []
        for j in range(1, n + 1):
            p, t = VertexLabel.pseudoline(j), VertexLabel.twin(j)
            if i == last:
                p, t = VertexLabel.connector_right(p), VertexLabel.connector_right(t)
            hp, ht = height_at(paths[p], chain_x(i)), height_at(paths[t], chain_x(i))
            upper_first = i % 2 == 0
            if (hp > ht) != upper_first:
                raise DegenerateRealization(
                    "Pair {} arrives at chain {} in the wrong vertical order.".format(j, i)
                )
            heights += [hp, ht] if upper_first else [ht, hp]
        crossers[i] = heights
    for i in range(1, last + 1):
        arcs = zigzag_chain(chain_x(i), crossers[i], y_top, y_bottom, w)
        if len(arcs) != chain_length(i, n):
            raise DegenerateRealization("Chain {} has {} arcs.".format(i, len(arcs)))
        for r, pts in enumerate(arcs, start=1):
            paths[VertexLabel.chain(i, r)] = pts
    top_base = y_top + Fraction(1, 8)
    bottom_base = y_bottom - Fraction(1, 8)
    for i in range(1, last):
        t1, t2 = _link_arcs(chain_x(i), chain_x(i + 1), top_base, w, 1)
        b1, b2 = _link_arcs(chain_x(i), chain_x(i + 1), bottom_base, w, -1)
        paths[VertexLabel.top(2 * i - 1)], paths[VertexLabel.top(2 * i)] = t1, t2
        paths[VertexLabel.bottom(2 * i - 1)], paths[VertexLabel.bottom(2 * i)] = b1, b2
    return {v: pad(pts, k) for v, pts in paths.items()}


def settle_polyline_rho(lines: Dict[int, TubeLine], orders, rho: Fraction, k: int, a: Fraction) -> Fraction:
    n = len(lines)
    for _ in range(MAX_HALVINGS):
        if clusters_fit(crossing_clusters(lines, rho, n), orders, a) and _pair_gaps_fit(lines, k, rho / 2):
            return rho
        rho /= 2
    raise DegenerateRealization("Pseudoline pairs do not separate for any tried spacing.")


def interior_point_counts(realization: Realization) -> Dict[VertexLabel, int]:
    return {v: obj.bends for v, obj in realization.objects.items()}


def _is_bend(a: Point, b: Point, c: Point) -> bool:
    return (b - a).cross(c - b) != 0


def bends_right_of_canvas(realization: Realization) -> bool:
    """Whether every non-degenerate bend of a pseudoline or twin lies right
    of the chain C_2."""
    limit = chain_x(2)
    for v, obj in realization.objects.items():
        if v.kind not in (Kind.PSEUDOLINE, Kind.TWIN):
            continue
        pts = obj.points
        for a, b, c in zip(pts, pts[1:], pts[2:]):
            if _is_bend(a, b, c) and b.x <= limit:
                return False
    return True


def twin_crossings_by_region(realization: Realization, n: int, k: int) -> Dict[int, List[int]]:
    """Per pair, the number of pseudoline/twin crossing points strictly
    between chains C_i and C_{i+1} for i = 2 .. 2k+1."""
    out = {}
    for j in range(1, n + 1):
        p = realization.objects[VertexLabel.pseudoline(j)]
        t = realization.objects[VertexLabel.twin(j)]
        points = {pt for s in p.segments() for u in t.segments() for pt in intersection_points(s, u)}
        out[j] = [
            sum(1 for pt in points if chain_x(i) < pt.x < chain_x(i + 1))
            for i in range(2, 2 * k + 2)
        ]
    return out


def _post_conditions(realization: Realization, n: int, k: int) -> Optional[str]:
    counts = interior_point_counts(realization)
    wrong = sorted(v for v, c in counts.items() if c != k)
    if wrong:
        return "{} does not have exactly {} interior points".format(wrong[0], k)
    if not bends_right_of_canvas(realization):
        return "a pseudoline bends inside the canvas"
    for j, regions in twin_crossings_by_region(realization, n, k).items():
        if min(regions) < 1:
            return "pair {} misses a crossing between consecutive chains".format(j)
    return None


def realize_polyline(
    arrangement: LineArrangement,
    art: ReductionArtifact,
    k: int,
    params: Optional[RealizerParams] = None,
) -> Realization:
    """Exact k-bend polyline realization of a polyline reduction graph."""
    params = params or RealizerParams()
    if art.kind != "polyline":
        raise ValueError("realize_polyline needs a polyline reduction, got {!r}.".format(art.kind))
    if art.k != k:
        raise ValueError("The reduction was built for k={}, got k={}.".format(art.k, k))
    n = art.n
    params.check_for(n)
    check_matches(arrangement, art.wiring)
    squeezed = squeeze(arrangement, params.a / 2).labelled()
    lines = {j: TubeLine(-line.slope, -line.intercept) for j, line in squeezed.items()}
    orders = crossing_orders(art.wiring)
    rho = params.rho
    diff = None
    for round_ in range(1, params.max_refine + 1):
        rho = settle_polyline_rho(lines, orders, rho, k, params.a)
        try:
            objects = _polyline_objects(art, lines, rho, params.a)
        except DegenerateRealization as e:
            logger.info("refine round %d: %s", round_, e)
            rho /= 2
            continue
        realization = Realization("polylines", objects, k)
        ok, diff = graphs_equal(art.graph, intersection_graph(objects))
        problem = None if ok else "intersection graph differs"
        if ok:
            problem = _post_conditions(realization, n, k)
        if problem is None:
            try:
                if not check_order_lemma(art.graph, art.cycle_order, art.order_connectors, objects):
                    problem = "connector order along the frame differs"
            except DegenerateRealization as e:
                problem = str(e)
        if problem is None:
            logger.info("polyline realization found in round %d (rho=%s)", round_, rho)
            return realization
        logger.info("refine round %d failed: %s", round_, problem)
        if diff is not None and not diff.empty:
            logger.debug("refine round %d diff:\n%s", round_, diff.report())
        rho /= 2
    raise RefinementExhausted(
        "No polyline realization after {} refine rounds.".format(params.max_refine), diff
    )

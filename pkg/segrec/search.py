"""
Best-effort numerical search for unit segment realizations of small graphs.

Each vertex is a unit segment given by its center and angle, so the length
constraint holds by construction and the penalty only measures the
intersection pattern. Every float result is snapped to exact rationals and
checked with :func:`segrec.graphs.intersection_graph` before it is reported.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple, Union

import networkx as nx
import numpy as np

from segrec.geom import Point, UnitSegment, unit_direction_from_angle
from segrec.graphs import GraphDiff, LabeledGraph, VertexLabel, graphs_equal, intersection_graph
from segrec.realizer import Realization
from segrec.utilities import is_positive_finite

logger = logging.getLogger(__name__)

SUCCESS_PENALTY = 1e-12
GRID_DENOMINATOR = 1 << 30
MIN_STEP = 1e-16


class NotFound(ValueError):
    """Raised when the restart budget is spent without a certified placement."""


@dataclass(frozen=True)
class SearchConfig:
    """Budget and step schedule of :func:`search_unit`.

    Parameters
    ----------
    restarts : int, default 100
        Number of independent starting placements.
    iterations : int, default 5000
        Gradient steps per restart.
    margin : float, default 1e-2
        Clearance required between non-adjacent segments. Large margins can
        make realizable graphs unreachable.
    step : float, default 0.1
        Initial step length of every backtracking line search.
    shrink : float, default 0.5
        Factor applied to the step while the Armijo condition fails.
    armijo : float, default 1e-4
        Sufficient decrease constant.
    seed : int, default 42
        Restart ``i`` draws from ``SeedSequence([seed, i])``.
    """

    restarts: int = 100
    iterations: int = 5000
    margin: float = 1e-2
    step: float = 0.1
    shrink: float = 0.5
    armijo: float = 1e-4
    seed: int = 42

    def __post_init__(self):
        if not isinstance(self.restarts, int) or self.restarts < 1:
            raise ValueError("restarts must be a positive integer, got {!r}.".format(self.restarts))
        if not isinstance(self.iterations, int) or self.iterations < 1:
            raise ValueError("iterations must be a positive integer, got {!r}.".format(self.iterations))
        for name in ("margin", "step"):
            value = getattr(self, name)
            if not is_positive_finite(value):
                raise ValueError("{} must be positive and finite, got {!r}.".format(name, value))
        if not 0 < self.shrink < 1:
            raise ValueError("shrink must lie in (0, 1), got {!r}.".format(self.shrink))
        if not 0 < self.armijo < 1:
            raise ValueError("armijo must lie in (0, 1), got {!r}.".format(self.armijo))
        if self.seed < 0:
            raise ValueError("seed must be non-negative, got {!r}.".format(self.seed))


@dataclass
class Placement:
    """Centers (shape ``(m, 2)``) and angles (shape ``(m,)``) of unit segments."""

    vertices: Tuple[VertexLabel, ...]
    centers: np.ndarray
    angles: np.ndarray

    def __post_init__(self):
        self.vertices = tuple(self.vertices)
        self.centers = np.asarray(self.centers, dtype=float).reshape(len(self.vertices), 2)
        self.angles = np.asarray(self.angles, dtype=float).reshape(len(self.vertices))
        if not (np.all(np.isfinite(self.centers)) and np.all(np.isfinite(self.angles))):
            raise ValueError("Placement values must be finite.")

    @property
    def vector(self) -> np.ndarray:
        return np.column_stack([self.centers, self.angles])

    def with_vector(self, x: np.ndarray) -> "Placement":
        return Placement(self.vertices, x[:, :2], x[:, 2])

    def endpoints(self) -> Tuple[np.ndarray, np.ndarray]:
        half = 0.5 * np.column_stack([np.cos(self.angles), np.sin(self.angles)])
        return self.centers - half, self.centers + half


def placement_from_realization(realization: Realization) -> Placement:
    """Float placement of an exact unit segment realization."""
    vertices = tuple(sorted(realization.objects))
    centers, angles = [], []
    for v in vertices:
        seg = realization.objects[v]
        if not isinstance(seg, UnitSegment):
            raise TypeError("Expected unit segments, got {!r} for {}.".format(type(seg).__name__, v))
        mid = seg.anchor + seg.direction.scale(Fraction(1, 2))
        centers.append((float(mid.x), float(mid.y)))
        angles.append(math.atan2(float(seg.direction.y), float(seg.direction.x)))
    return Placement(vertices, np.array(centers), np.array(angles))


def _crosses(p0, p1, q0, q1) -> bool:
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    o1, o2 = orient(p0, p1, q0), orient(p0, p1, q1)
    o3, o4 = orient(q0, q1, p0), orient(q0, q1, p1)
    return o1 * o2 < 0 and o3 * o4 < 0


def _point_segment(x, a, b):
    """Squared distance from x to segment ab and its gradient in (x, a, b)."""
    ab = b - a
    denom = float(ab @ ab)
    t = 0.0 if denom == 0 else min(1.0, max(0.0, float((x - a) @ ab) / denom))
    r = x - (a + t * ab)
    return float(r @ r), 2 * r, -2 * r * (1 - t), -2 * r * t


def segment_distance_sq(p0, p1, q0, q1):
    """Squared distance between segments p and q and its gradient with
    respect to (p0, p1, q0, q1); zero for crossing segments."""
    zero = np.zeros(2)
    if _crosses(p0, p1, q0, q1):
        return 0.0, (zero, zero, zero, zero)
    candidates = []
    d, gx, ga, gb = _point_segment(p0, q0, q1)
    candidates.append((d, (gx, zero, ga, gb)))
    d, gx, ga, gb = _point_segment(p1, q0, q1)
    candidates.append((d, (zero, gx, ga, gb)))
    d, gx, ga, gb = _point_segment(q0, p0, p1)
    candidates.append((d, (ga, gb, gx, zero)))
    d, gx, ga, gb = _point_segment(q1, p0, p1)
    candidates.append((d, (ga, gb, zero, gx)))
    return min(candidates, key=lambda c: c[0])


def penalty(g: LabeledGraph, p: Placement, margin: float) -> Tuple[float, np.ndarray]:
    """Penalty of a placement and its gradient, shape ``(m, 3)``.

    Edges contribute their squared segment distance; non-edges contribute
    ``max(0, margin - distance) ** 2``. At kinks the gradient is that of the
    active closest-feature pair.
    """
    missing = set(g.vertices) - set(p.vertices)
    if missing:
        raise ValueError("Placement lacks vertex {}.".format(sorted(missing)[0]))
    lo, hi = p.endpoints()
    half_perp = 0.5 * np.column_stack([-np.sin(p.angles), np.cos(p.angles)])
    grad_lo = np.zeros_like(lo)
    grad_hi = np.zeros_like(hi)
    total = 0.0
    m = len(p.vertices)
    for i in range(m):
        for j in range(i + 1, m):
            d2, (g0, g1, g2, g3) = segment_distance_sq(lo[i], hi[i], lo[j], hi[j])
            if g.has_edge(p.vertices[i], p.vertices[j]):
                value, scale = d2, 1.0
            else:
                d = math.sqrt(d2)
                if d >= margin:
                    continue
                value = (margin - d) ** 2
                scale = -(margin - d) / d if d > 0 else 0.0
            total += value
            grad_lo[i] += scale * g0
            grad_hi[i] += scale * g1
            grad_lo[j] += scale * g2
            grad_hi[j] += scale * g3
    grad = np.zeros((m, 3))
    grad[:, :2] = grad_lo + grad_hi
    grad[:, 2] = np.einsum("ij,ij->i", grad_hi - grad_lo, half_perp)
    return total, grad


@dataclass
class Certified:
    realization: Realization


@dataclass
class Rejected:
    diff: GraphDiff = field(default_factory=GraphDiff)


def _snap(value: float) -> Fraction:
    return Fraction(round(value * GRID_DENOMINATOR), GRID_DENOMINATOR)


def snap_placement(p: Placement) -> Realization:
    """Exact unit segments near ``p``: rational directions and grid centers."""
    objects: Dict[VertexLabel, UnitSegment] = {}
    for v, (cx, cy), theta in zip(p.vertices, p.centers, p.angles):
        direction = unit_direction_from_angle(float(theta), GRID_DENOMINATOR)
        center = Point(_snap(cx), _snap(cy))
        objects[v] = UnitSegment(center - direction.scale(Fraction(1, 2)), direction)
    return Realization("unit_segments", objects)


def certify(g: LabeledGraph, p: Placement) -> Union[Certified, Rejected]:
    realization = snap_placement(p)
    ok, diff = graphs_equal(g, intersection_graph(realization.objects))
    return Certified(realization) if ok else Rejected(diff)


def polygon_placement(g: LabeledGraph, side: float = 0.8) -> Placement:
    """Segments along the sides of a regular polygon, in depth-first order,
    so that consecutive vertices cross near the corners."""
    order = list(nx.dfs_preorder_nodes(g.nx)) if len(g) else []
    m = len(order)
    phi = 2 * np.pi * np.arange(m) / max(m, 1)
    radius = side / (2 * math.tan(math.pi / m)) if m > 2 else 0.25
    centers = radius * np.column_stack([np.cos(phi), np.sin(phi)])
    return Placement(tuple(order), centers, phi + np.pi / 2)


def star_placement(g: LabeledGraph) -> Placement:
    """All segments through the origin with evenly spread angles."""
    order = g.sorted_vertices()
    m = len(order)
    return Placement(tuple(order), np.zeros((m, 2)), np.pi * np.arange(m) / max(m, 1))


def _start(g: LabeledGraph, restart: int, rng: np.random.Generator, init: Optional[Placement]) -> Placement:
    if restart == 0 and init is not None:
        return init
    base = polygon_placement(g) if restart % 2 == 0 else star_placement(g)
    spread = 0.02 + 0.1 * (restart // 2)
    m = len(base.vertices)
    return Placement(
        base.vertices,
        base.centers + rng.normal(0.0, spread, size=(m, 2)),
        base.angles + rng.normal(0.0, 2 * spread, size=m),
    )


def descend(g: LabeledGraph, p: Placement, cfg: SearchConfig) -> Tuple[Placement, float]:
    """Gradient descent with Armijo backtracking; stops at a zero penalty."""
    x = p.vector
    f, grad = penalty(g, p, cfg.margin)
    for _ in range(cfg.iterations):
        if f < SUCCESS_PENALTY:
            break
        norm_sq = float(np.sum(grad * grad))
        if norm_sq == 0:
            break
        t = cfg.step
        while t > MIN_STEP:
            trial = p.with_vector(x - t * grad)
            f_trial, grad_trial = penalty(g, trial, cfg.margin)
            if f_trial <= f - cfg.armijo * t * norm_sq:
                break
            t *= cfg.shrink
        else:
            break
        p, x, f, grad = trial, trial.vector, f_trial, grad_trial
    return p, f


def search_unit(g: LabeledGraph, cfg: Optional[SearchConfig] = None, init: Optional[Placement] = None) -> Placement:
    """First certified placement over seeded restarts, in restart order."""
    cfg = cfg or SearchConfig()
    if init is not None and set(init.vertices) != set(g.vertices):
        raise ValueError("Initial placement vertices do not match the graph.")
    for restart in range(cfg.restarts):
        rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, restart]))
        placement, f = descend(g, _start(g, restart, rng, init), cfg)
        logger.debug("Restart %d ended with penalty %.3e.", restart, f)
        if f >= SUCCESS_PENALTY:
            continue
        verdict = certify(g, placement)
        if isinstance(verdict, Certified):
            logger.info("Certified placement found on restart %d.", restart)
            return placement
        logger.debug("Restart %d rejected after snapping:\n%s", restart, verdict.diff.report())
    raise NotFound(
        "No certified placement after {} restarts of {} iterations.".format(cfg.restarts, cfg.iterations)
    )


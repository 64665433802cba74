"""
Pseudoline arrangements as wiring diagrams, and the concrete line
arrangements they are compared against.

Pseudolines are labelled 1..n by their top-to-bottom order at the left
vertical line. For a line arrangement this is the order by ascending slope,
since the line with the smallest slope is the highest one far to the left.
"""

import itertools
import logging
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from segrec.geom import Point
from segrec.utilities import TypeScalar, to_rational

logger = logging.getLogger(__name__)

CrossingOrders = Dict[int, List[int]]

CATALOG_SIZES = range(2, 9)


class DegenerateArrangement(ValueError):
    """Raised when a line arrangement is not simple."""


class UnknownCatalogEntry(ValueError):
    """Raised for catalog names that do not exist."""


class InvalidWiring(ValueError):
    """Raised when a wiring diagram does not describe a simple arrangement."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("Invalid wiring diagram: " + "; ".join(self.violations))


@dataclass(frozen=True)
class WiringDiagram:
    """A simple pseudoline arrangement as a sequence of adjacent swaps.

    Each swap ``s`` exchanges the pseudolines currently at positions ``s``
    and ``s + 1`` (1-based, counted from the top).
    """

    n: int
    swaps: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "swaps", tuple(int(s) for s in self.swaps))


@dataclass(frozen=True)
class Line:
    slope: Fraction
    intercept: Fraction

    def __post_init__(self):
        object.__setattr__(self, "slope", to_rational(self.slope))
        object.__setattr__(self, "intercept", to_rational(self.intercept))

    def y_at(self, x: TypeScalar) -> Fraction:
        return self.slope * to_rational(x) + self.intercept


@dataclass(frozen=True)
class LineArrangement:
    lines: Tuple[Line, ...]

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))

    @property
    def n(self) -> int:
        return len(self.lines)

    def labelled(self) -> Dict[int, Line]:
        """Lines keyed by pseudoline label (ascending slope)."""
        ordered = sorted(self.lines, key=lambda line: line.slope)
        return {i: line for i, line in enumerate(ordered, start=1)}

    def crossings(self) -> Dict[Tuple[int, int], Point]:
        """Crossing point of every pair of labelled lines, keyed (i, j), i < j.

        Raises DegenerateArrangement when the arrangement is not simple.
        """
        labelled = self.labelled()
        slopes = Counter(line.slope for line in self.lines)
        repeated = sorted(s for s, count in slopes.items() if count > 1)
        if repeated:
            raise DegenerateArrangement(
                "Lines must have pairwise distinct slopes, "
                "slope {!r} repeats.".format(repeated[0])
            )
        points: Dict[Tuple[int, int], Point] = {}
        seen: Dict[Point, Tuple[int, int]] = {}
        for i, j in itertools.combinations(sorted(labelled), 2):
            li, lj = labelled[i], labelled[j]
            x = (lj.intercept - li.intercept) / (li.slope - lj.slope)
            point = Point(x, li.y_at(x))
            if point in seen:
                raise DegenerateArrangement(
                    "Crossings {!r} and {!r} coincide at {!r}; no three lines "
                    "may pass through one point.".format(seen[point], (i, j), point)
                )
            seen[point] = (i, j)
            points[(i, j)] = point
        return points


def validate_wiring(w: WiringDiagram) -> List[str]:
    """Violations of simplicity in ``w``; an empty list means valid."""
    violations = []
    n = w.n
    if n < 1:
        return ["n must be at least 1, got {!r}".format(n)]
    expected = n * (n - 1) // 2
    if len(w.swaps) != expected:
        violations.append(
            "expected {} swaps for n={}, got {}".format(expected, n, len(w.swaps))
        )
    order = list(range(1, n + 1))
    counts: Counter = Counter()
    for index, s in enumerate(w.swaps):
        if not 1 <= s <= n - 1:
            violations.append(
                "swap #{} has position {} outside 1..{}".format(index + 1, s, n - 1)
            )
            continue
        a, b = order[s - 1], order[s]
        counts[frozenset((a, b))] += 1
        order[s - 1], order[s] = b, a
    for i, j in itertools.combinations(range(1, n + 1), 2):
        times = counts[frozenset((i, j))]
        if times != 1:
            violations.append("pair {{{},{}}} swaps {} times".format(i, j, times))
    if order != list(range(n, 0, -1)):
        violations.append(
            "final order {} is not the reversal of 1..{}".format(order, n)
        )
    return violations


def check_wiring(w: WiringDiagram) -> WiringDiagram:
    violations = validate_wiring(w)
    if violations:
        raise InvalidWiring(violations)
    return w


def crossing_orders(w: WiringDiagram) -> CrossingOrders:
    """For each pseudoline, the left-to-right sequence of pseudolines it crosses."""
    check_wiring(w)
    order = list(range(1, w.n + 1))
    result: CrossingOrders = {label: [] for label in order}
    for s in w.swaps:
        a, b = order[s - 1], order[s]
        result[a].append(b)
        result[b].append(a)
        order[s - 1], order[s] = b, a
    return result


def ranks(orders: CrossingOrders) -> Dict[int, Dict[int, int]]:
    """rank[l][m] is the 1-based position of m in the crossing order of l."""
    return {
        label: {other: pos for pos, other in enumerate(seq, start=1)}
        for label, seq in orders.items()
    }


def wiring_from_lines(arrangement: LineArrangement) -> WiringDiagram:
    """The wiring diagram read off a simple line arrangement.

    Crossings are swept left to right; crossings sharing an x-coordinate are
    necessarily at non-adjacent positions and are emitted by ascending
    position.
    """
    crossings = arrangement.crossings()
    n = arrangement.n
    order = list(range(1, n + 1))
    swaps: List[int] = []
    by_x = sorted(crossings.items(), key=lambda item: item[1].x)
    for _, group in itertools.groupby(by_x, key=lambda item: item[1].x):
        positioned = []
        for (i, j), _point in group:
            pi, pj = order.index(i), order.index(j)
            if abs(pi - pj) != 1:
                raise DegenerateArrangement(
                    "Lines {} and {} are not adjacent at their crossing.".format(i, j)
                )
            positioned.append(min(pi, pj))
        for pos in sorted(positioned):
            order[pos], order[pos + 1] = order[pos + 1], order[pos]
            swaps.append(pos + 1)
    return WiringDiagram(n, tuple(swaps))


def line_crossing_orders(arrangement: LineArrangement) -> CrossingOrders:
    """Crossing orders taken directly from the exact crossing x-values."""
    crossings = arrangement.crossings()
    result: CrossingOrders = {}
    for label in range(1, arrangement.n + 1):
        hits = []
        for (i, j), point in crossings.items():
            if label == i:
                hits.append((point.x, j))
            elif label == j:
                hits.append((point.x, i))
        result[label] = [other for _, other in sorted(hits)]
    return result


def reflect(w: WiringDiagram) -> WiringDiagram:
    """Mirror ``w`` top-to-bottom; pseudoline i becomes n + 1 - i."""
    return WiringDiagram(w.n, tuple(w.n - s for s in w.swaps))


def equivalent(w1: WiringDiagram, w2: WiringDiagram, allow_reflection: bool = False) -> bool:
    """Whether two diagrams have the same per-pseudoline crossing orders."""
    if w1.n != w2.n:
        return False
    target = crossing_orders(w2)
    if crossing_orders(w1) == target:
        return True
    return allow_reflection and crossing_orders(reflect(w1)) == target


def _conforms(arrangement: LineArrangement, a: Fraction) -> bool:
    if any(abs(line.slope) > a for line in arrangement.lines):
        return False
    return all(
        abs(p.x) < a and abs(p.y) < a for p in arrangement.crossings().values()
    )


def squeeze(arrangement: LineArrangement, a: TypeScalar) -> LineArrangement:
    """Affinely squeeze ``arrangement`` so slopes lie in [-a, a] and all
    crossings lie in the open square (-a, a)^2.

    A vertical scaling bounds the slopes; a uniform scaling about the centre
    of the crossings' bounding box followed by a translation to the origin
    then shrinks the crossings. Both maps keep the left-to-right order of
    crossings, so the wiring diagram is unchanged.
    """
    a = to_rational(a)
    if a <= 0:
        raise ValueError("Squeeze bound must be positive, got {!r}.".format(a))
    if _conforms(arrangement, a):
        return arrangement
    max_slope = max(abs(line.slope) for line in arrangement.lines)
    sigma = min(Fraction(1), a / max_slope) if max_slope else Fraction(1)
    scaled = LineArrangement(
        tuple(Line(sigma * line.slope, sigma * line.intercept) for line in arrangement.lines)
    )
    points = list(scaled.crossings().values())
    if not points:
        return scaled
    cx = (min(p.x for p in points) + max(p.x for p in points)) / 2
    cy = (min(p.y for p in points) + max(p.y for p in points)) / 2
    half = max(max(abs(p.x - cx), abs(p.y - cy)) for p in points)
    lam = min(Fraction(1), a / (2 * half)) if half else Fraction(1)
    logger.debug("squeeze: sigma=%s lambda=%s centre=(%s, %s)", sigma, lam, cx, cy)
    return LineArrangement(
        tuple(
            Line(line.slope, lam * (line.slope * cx + line.intercept - cy))
            for line in scaled.lines
        )
    )


def catalog(name: str) -> LineArrangement:
    """Stretchable fixtures ``generic2`` .. ``generic8``: lines y = i x + i^2."""
    match = re.fullmatch(r"generic(\d+)", name)
    if match is None or int(match.group(1)) not in CATALOG_SIZES:
        raise UnknownCatalogEntry(
            "Unknown catalog entry {!r}, choose one of {}.".format(
                name, ", ".join(catalog_names())
            )
        )
    n = int(match.group(1))
    return LineArrangement(tuple(Line(i, i * i) for i in range(1, n + 1)))


def catalog_names() -> List[str]:
    return ["generic{}".format(n) for n in CATALOG_SIZES]


def random_arrangement(
    n: int, seed: Optional[int] = None, max_attempts: int = 1000
) -> LineArrangement:
    """A seeded simple arrangement of ``n`` lines with small rational data."""
    if n < 1:
        raise ValueError("Need at least one line, got n={!r}.".format(n))
    rng = np.random.default_rng(seed)
    for _ in range(max_attempts):
        lines = tuple(
            Line(
                Fraction(int(rng.integers(-40, 41)), int(rng.integers(1, 8))),
                Fraction(int(rng.integers(-40, 41)), int(rng.integers(1, 8))),
            )
            for _ in range(n)
        )
        candidate = LineArrangement(lines)
        try:
            candidate.crossings()
        except DegenerateArrangement:
            continue
        return candidate
    raise DegenerateArrangement(
        "No simple arrangement of {} lines found in {} attempts.".format(n, max_attempts)
    )

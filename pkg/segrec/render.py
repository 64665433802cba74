"""
SVG drawings of realizations.

A drawing is a :class:`SvgCanvas` holding one :class:`ObjectPath` per
geometric object. The y axis is flipped so that drawings read like the
usual mathematical plane.
"""

from typing import List, Optional, Sequence, Tuple

from branca.colormap import LinearColormap
from branca.element import Element
from jinja2 import Environment, PackageLoader, Template

from segrec.geom import object_points
from segrec.graphs import Kind, VertexLabel
from segrec.realizer import Realization
from segrec.utilities import get_bounds

ENV = Environment(loader=PackageLoader("segrec", "templates"))

PADDING = 0.05

ROLE_OF_KIND = {
    Kind.PSEUDOLINE: "important",
    Kind.TWIN: "important",
    Kind.PROBE: "probes",
    Kind.CONNECTOR_LEFT: "connectors_left",
    Kind.CONNECTOR_RIGHT: "connectors_right",
    Kind.CYCLE: "cycle",
    Kind.CHAIN: "frame",
    Kind.TOP: "frame",
    Kind.BOTTOM: "frame",
    Kind.NAMED: "other",
}
DRAW_ROLES = ("important", "probes", "connectors_left", "connectors_right", "cycle", "frame", "other")

_PALETTE = LinearColormap(
    ["#d7191c", "#fdae61", "#1a9641", "#2b83ba", "#5e3c99", "#404040", "#bababa"],
    vmin=0,
    vmax=len(DRAW_ROLES) - 1,
).to_step(len(DRAW_ROLES))


def role_color(role: str) -> str:
    """Hex colour of a drawing role."""
    return _PALETTE.rgb_hex_str(DRAW_ROLES.index(role))


def _fmt(value: float) -> str:
    text = "{:.6f}".format(value).rstrip("0").rstrip(".")
    return "0" if text in ("", "-0") else text


class ObjectPath(Element):
    """One segment or polyline, drawn as an SVG polyline with a title.

    Parameters
    ----------
    points: sequence of (x, y) floats
        Points in the mathematical plane; y is flipped on output.
    label: str
        Canonical vertex label, written as the title of the path.
    color: str
        Stroke colour.
    """

    _template = Template(
        '<polyline points="{{ this.points_attr }}" stroke="{{ this.color }}" '
        'stroke-width="1" vector-effect="non-scaling-stroke">'
        "<title>{{ this.label|e }}</title></polyline>"
    )

    def __init__(self, points: Sequence[Tuple[float, float]], label: str, color: str):
        super().__init__()
        self._name = "ObjectPath"
        self.points = [(float(x), float(y)) for x, y in points]
        self.label = label
        self.color = color

    @property
    def points_attr(self) -> str:
        return " ".join("{},{}".format(_fmt(x), _fmt(-y)) for x, y in self.points)


class SvgCanvas(Element):
    """Root element of a drawing; the view box fits every child with 5%
    padding on each side.

    Parameters
    ----------
    title: str, default ''
        Document title.
    scale: int, default 400
        Width of the image in pixels.
    """

    def __init__(self, title: str = "", scale: int = 400):
        super().__init__()
        if scale <= 0:
            raise ValueError("scale must be positive, got {!r}.".format(scale))
        self._name = "SvgCanvas"
        self._env = ENV
        self._template = self._env.get_template("canvas.svg")
        self.title = title
        self.scale = scale

    def _paths(self) -> List[ObjectPath]:
        return [c for c in self._children.values() if isinstance(c, ObjectPath)]

    def _box(self) -> Tuple[float, float, float, float]:
        bounds = get_bounds((x, -y) for path in self._paths() for x, y in path.points)
        if bounds[0][0] is None:
            return -1.0, -1.0, 2.0, 2.0
        (x0, y0), (x1, y1) = bounds
        w, h = x1 - x0, y1 - y0
        size = max(w, h) or 1.0
        pad_x = PADDING * (w or size)
        pad_y = PADDING * (h or size)
        return x0 - pad_x, y0 - pad_y, (w or size) + 2 * pad_x, (h or size) + 2 * pad_y

    @property
    def view_box(self) -> str:
        return " ".join(_fmt(v) for v in self._box())

    @property
    def width(self) -> int:
        return self.scale

    @property
    def height(self) -> int:
        _, _, w, h = self._box()
        return max(1, round(self.scale * h / w))


def draw(realization: Realization, scale: int = 400, title: Optional[str] = None) -> SvgCanvas:
    """Build the drawing of a realization, objects in label order."""
    if title is None:
        title = "{} ({} objects{})".format(
            realization.kind,
            len(realization),
            ", k={}".format(realization.k) if realization.k is not None else "",
        )
    canvas = SvgCanvas(title=title, scale=scale)
    for v in sorted(realization.objects):
        canvas.add_child(_path_for(v, realization.objects[v]))
    return canvas


def _path_for(v: VertexLabel, obj) -> ObjectPath:
    points = [(float(p.x), float(p.y)) for p in object_points(obj)]
    return ObjectPath(points, str(v), role_color(ROLE_OF_KIND[v.kind]))


def to_svg(realization: Realization, scale: int = 400, title: Optional[str] = None) -> str:
    return draw(realization, scale, title).render()


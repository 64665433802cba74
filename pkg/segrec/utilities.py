import json
import math
from fractions import Fraction
from numbers import Rational
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from branca.utilities import none_max, none_min

TypeScalar = Union[int, str, Fraction, Rational]
TypePair = Sequence[TypeScalar]
TypeBounds = List[List[Optional[Fraction]]]


def to_rational(value: Any) -> Fraction:
    """Convert an int, Fraction or "num/den" string to an exact Fraction.

    Floats are refused: every coordinate in this package is exact, and a
    float silently carries binary rounding into the geometry.
    """
    if isinstance(value, bool):
        raise TypeError("Expected a rational value, got the boolean {!r}.".format(value))
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(
                "Could not parse {!r} as a rational, expected a string "
                "of the form 'num/den'.".format(value)
            )
    if isinstance(value, float):
        raise TypeError(
            "Floats are not accepted as exact coordinates, got {!r}. "
            "Pass a 'num/den' string or a Fraction instead.".format(value)
        )
    raise TypeError(
        "Expected a rational value, instead got {!r} of type {}.".format(
            value, type(value)
        )
    )


def format_rational(value: Fraction) -> str:
    """Print a rational as the canonical "num/den" string."""
    value = Fraction(value)
    return "{}/{}".format(value.numerator, value.denominator)


def validate_point(point: TypePair) -> Tuple[Fraction, Fraction]:
    """Validate a single coordinate pair and convert it to exact rationals.

    Validate that point:
    * is a sized variable
    * with size 2
    * allows indexing (i.e. has an ordering)
    * where both values are rationals (or parse as rationals)
    """
    if not hasattr(point, "__len__"):
        raise TypeError(
            "Point should be a sized variable, "
            "for example a list or a tuple, instead got "
            "{!r} of type {}.".format(point, type(point))
        )
    if len(point) != 2:
        raise ValueError(
            "Expected two (x, y) values for point, "
            "instead got: {!r}.".format(point)
        )
    try:
        coords = (point[0], point[1])
    except (TypeError, KeyError):
        raise TypeError(
            "Point should support indexing, like a list or "
            "a tuple does, instead got {!r} of type {}.".format(point, type(point))
        )
    return to_rational(coords[0]), to_rational(coords[1])


def get_bounds(points: Iterable[TypePair]) -> TypeBounds:
    """Computes the bounds of the object, [[x_min, y_min], [x_max, y_max]]."""
    bounds: TypeBounds = [[None, None], [None, None]]
    for point in points:
        x, y = point[0], point[1]
        bounds = [
            [none_min(bounds[0][0], x), none_min(bounds[0][1], y)],
            [none_max(bounds[1][0], x), none_max(bounds[1][1], y)],
        ]
    return bounds


def is_positive_finite(value: float) -> bool:
    return math.isfinite(value) and value > 0


def dump_json(data: Dict[str, Any]) -> str:
    """Serialize with sorted keys so equal inputs give byte-identical output."""
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


class ParseError(ValueError):
    """Raised for malformed input documents.

    ``line`` and ``column`` are 1-based when the location is known.
    """

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            message = "{} (line {}, column {})".format(message, line, column)
        super().__init__(message)

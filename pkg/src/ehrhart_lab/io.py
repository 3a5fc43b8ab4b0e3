"""JSON encodings for polygons, quasi-polynomials and generator words.

Coordinates and coefficients are written as exact rational strings (``"3"``,
``"-2/5"``).  Parsing accepts integers, decimal-free strings and unreduced
fractions such as ``"4/6"``, and canonicalizes them.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Any

from .ehrhart import QuasiPolynomial
from .geometry import Point2, RationalPolygon, as_rational, format_rational, make_polygon
from .reflexive import GeneratorWord


class FormatError(ValueError):
    """A JSON document does not have the expected shape."""


def _parse_coordinate(value: Any) -> Any:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise FormatError(f"coordinate must be an integer or a rational string, got {value!r}")
    try:
        return as_rational(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational {value!r}: {exc}") from None


def point_to_json(p: Point2) -> list[str]:
    return [format_rational(p.x), format_rational(p.y)]


def polygon_to_json(P: RationalPolygon) -> dict:
    return {"vertices": [point_to_json(v) for v in P.vertices]}


def polygon_from_json(data: Any) -> RationalPolygon:
    """Parse ``{"vertices": [[x, y], ...]}``; the convex hull of the points is returned."""
    if not isinstance(data, dict) or not isinstance(data.get("vertices"), list):
        raise FormatError('polygon JSON needs a "vertices" list')
    pts = []
    for item in data["vertices"]:
        if not isinstance(item, (list, tuple)) or len(item) != 2:
            raise FormatError(f"vertex must be a pair, got {item!r}")
        pts.append(Point2(_parse_coordinate(item[0]), _parse_coordinate(item[1])))
    return make_polygon(pts)


def qp_to_json(qp: QuasiPolynomial) -> dict:
    return qp.to_json()


def qp_from_json(data: Any) -> QuasiPolynomial:
    if not isinstance(data, dict) or "period" not in data:
        raise FormatError('quasi-polynomial JSON needs a "period" field')
    try:
        return QuasiPolynomial.from_json(data)
    except (TypeError, ZeroDivisionError) as exc:
        raise FormatError(str(exc)) from None


def word_to_json(w: GeneratorWord) -> dict:
    return w.to_json()


def word_from_json(data: Any) -> GeneratorWord:
    if not isinstance(data, dict) or not isinstance(data.get("letters"), list):
        raise FormatError('word JSON needs a "letters" list')
    try:
        return GeneratorWord.from_json(data)
    except (KeyError, TypeError, ZeroDivisionError) as exc:
        raise FormatError(f"bad letter: {exc}") from None


def read_json(source: str | Path) -> Any:
    """Load JSON from a path, or from standard input when ``source`` is ``"-"``."""
    try:
        if str(source) == "-":
            return json.load(sys.stdin)
        with open(source, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{source}: invalid JSON ({exc})") from None


def dumps(data: Any) -> str:
    return json.dumps(data, separators=(",", ":"))

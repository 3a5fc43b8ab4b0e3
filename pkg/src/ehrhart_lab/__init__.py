"""Exact lattice-point counting and Ehrhart quasi-polynomials of rational polygons."""
from __future__ import annotations

from .ehrhart import (
    QuasiPolynomial,
    ehrhart_qp,
    index_sequence,
    mcmullen_check,
    period_sequence,
    pip_report,
    scott_admissible,
)
from .geometry import Mat2, Point2, RationalPolygon, Segment, area, make_polygon, point
from .lattice import count_lattice_points, oracle_count

__all__ = [
    "Mat2",
    "Point2",
    "QuasiPolynomial",
    "RationalPolygon",
    "Segment",
    "area",
    "count_lattice_points",
    "ehrhart_qp",
    "index_sequence",
    "make_polygon",
    "mcmullen_check",
    "oracle_count",
    "period_sequence",
    "pip_report",
    "point",
    "scott_admissible",
]

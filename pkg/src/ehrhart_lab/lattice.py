"""Lattice-point counting for dilates of polygons, segments and signed regions.

Two independent counters are provided for polygons: :func:`count_lattice_points`
scans integer columns and intersects each with the polygon's edge
half-planes using integer floor/ceil division, while :func:`oracle_count`
applies the edge sign test to every lattice point of the bounding box.
Both are exact: numpy int64 arrays are used only when the magnitudes
involved provably fit, and Python integers otherwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Union

import numpy as np

from .geometry import (
    Closedness,
    Mat2,
    Point2,
    RationalPolygon,
    Segment,
    make_polygon,
)

Body = Union[RationalPolygon, Segment, Point2]

_INT64_SAFE = 2**62


def _check_dilation(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"dilation factor must be a positive integer, got {n!r}")


def _scaled_vertices(P: RationalPolygon) -> tuple[int, list[tuple[int, int]]]:
    L = P.denominator
    return L, [(int(v.x * L), int(v.y * L)) for v in P.vertices]


def _dtype_for(bound: int):
    return np.int64 if bound < _INT64_SAFE else object


def count_lattice_points(P: RationalPolygon, n: int) -> int:
    """Number of integer points in the closed dilate ``nP`` (column scan)."""
    _check_dilation(n)
    L, V = _scaled_vertices(P)
    xs_scaled = [x for x, _ in V]
    lo_col = -((-n * min(xs_scaled)) // L)
    hi_col = (n * max(xs_scaled)) // L
    if hi_col < lo_col:
        return 0

    # Column x meets edge p->q (scaled by L, interior on the left) where
    #   dx*L*y >= n*(dx*py - dy*px) + dy*L*x.
    edges = []
    m = len(V)
    for i in range(m):
        px, py = V[i]
        qx, qy = V[(i + 1) % m]
        dx, dy = qx - px, qy - py
        edges.append((n * (dx * py - dy * px), dy * L, dx * L))

    xmax_abs = max(abs(lo_col), abs(hi_col))
    bound = max(abs(c) + abs(a) * xmax_abs + abs(b) for c, a, b in edges) + 2
    dtype = _dtype_for(bound)
    xs = np.arange(lo_col, hi_col + 1).astype(dtype)
    big = bound + 1
    lower = np.full(xs.shape, -big, dtype=dtype)
    upper = np.full(xs.shape, big, dtype=dtype)
    ok = np.ones(xs.shape, dtype=bool)
    for c, a, b in edges:
        num = xs * a + c
        if b > 0:
            lower = np.maximum(lower, -((-num) // b))
        elif b < 0:
            upper = np.minimum(upper, (-num) // (-b))
        else:
            ok &= num <= 0
    counts = upper - lower + 1
    counts = np.where(ok & (counts > 0), counts, 0)
    return int(counts.sum())


def oracle_count(P: RationalPolygon, n: int) -> int:
    """Brute-force count: edge sign test on every lattice point of the bounding box."""
    _check_dilation(n)
    L, V = _scaled_vertices(P)
    # Scaled coordinates of nP; a real point z is tested as L*z.
    V = [(n * x, n * y) for x, y in V]
    xmin = -((-min(x for x, _ in V)) // L)
    xmax = max(x for x, _ in V) // L
    ymin = -((-min(y for _, y in V)) // L)
    ymax = max(y for _, y in V) // L
    if xmax < xmin or ymax < ymin:
        return 0
    reach = max(
        max(abs(xmin), abs(xmax), abs(ymin), abs(ymax)) * L,
        max(max(abs(x), abs(y)) for x, y in V),
    )
    dtype = _dtype_for(8 * reach * reach + 1)
    gx, gy = np.meshgrid(
        np.arange(xmin, xmax + 1).astype(dtype) * L,
        np.arange(ymin, ymax + 1).astype(dtype) * L,
        indexing="ij",
    )
    inside = np.ones(gx.shape, dtype=bool)
    m = len(V)
    for i in range(m):
        ux, uy = V[i]
        vx, vy = V[(i + 1) % m]
        inside &= (vx - ux) * (gy - uy) - (vy - uy) * (gx - ux) >= 0
    return int(inside.sum())


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _primitive(w: Point2) -> tuple[int, int]:
    L = w.denominator
    a, b = int(w.x * L), int(w.y * L)
    g = math.gcd(a, b)
    return a // g, b // g


def count_segment(s: Segment, n: int) -> int:
    """Lattice points on the dilated segment ``n*s``, honouring its closedness."""
    _check_dilation(n)
    u, v = s.u * n, s.v * n
    px, py = _primitive(v - u)
    # Normal (-py, px) is primitive, so the line holds lattice points iff
    # its offset is an integer.
    offset = -py * u.x + px * u.y
    if offset.denominator != 1:
        return 0
    g, a, b = _xgcd(-py, px)
    if g < 0:
        a, b = -a, -b
    z0 = Point2(a * offset, b * offset)
    norm = px * px + py * py
    t_u = ((u.x - z0.x) * px + (u.y - z0.y) * py) / norm
    t_v = ((v.x - z0.x) * px + (v.y - z0.y) * py) / norm
    # t_v > t_u since (px, py) points from u to v.
    lo = math.ceil(t_u) if s.closedness.includes_u else math.floor(t_u) + 1
    hi = math.floor(t_v) if s.closedness.includes_v else math.ceil(t_v) - 1
    return max(0, hi - lo + 1)


def count_point(p: Point2, n: int) -> int:
    _check_dilation(n)
    return int((p * n).is_integral)


def count_body(body: Body, n: int) -> int:
    if isinstance(body, RationalPolygon):
        return count_lattice_points(body, n)
    if isinstance(body, Segment):
        return count_segment(body, n)
    if isinstance(body, Point2):
        return count_point(body, n)
    raise TypeError(f"not a countable body: {body!r}")


@dataclass(frozen=True)
class RegionExpression:
    """Signed integer combination of polygons, segments and points."""

    terms: tuple[tuple[int, Body], ...] = field(default_factory=tuple)

    @classmethod
    def of(cls, body: Body, multiplicity: int = 1) -> RegionExpression:
        return cls(((multiplicity, body),))

    def __add__(self, other: RegionExpression) -> RegionExpression:
        return RegionExpression(self.terms + other.terms)

    def __sub__(self, other: RegionExpression) -> RegionExpression:
        return RegionExpression(self.terms + tuple((-m, b) for m, b in other.terms))

    def __len__(self) -> int:
        return len(self.terms)

    def bodies(self) -> Iterable[Body]:
        return (b for _, b in self.terms)

    def map_bodies(self, f) -> RegionExpression:
        return RegionExpression(tuple((m, f(b)) for m, b in self.terms))

    def hull(self) -> RationalPolygon:
        """Convex hull of the positive polygon terms.

        Only meaningful when the encoded point set is known to be convex.
        """
        pts = [v for m, b in self.terms if m > 0 and isinstance(b, RationalPolygon) for v in b]
        return make_polygon(pts)

    def __str__(self) -> str:
        return " ".join(f"{'+' if m >= 0 else '-'}{abs(m)}*{b}" for m, b in self.terms)


def as_region(region: RegionExpression | Body) -> RegionExpression:
    if isinstance(region, RegionExpression):
        return region
    return RegionExpression.of(region)


def count_region(e: RegionExpression | Body, n: int) -> int:
    """Multiplicity-weighted sum of the counts of each body dilated by ``n``."""
    _check_dilation(n)
    return sum(m * count_body(b, n) for m, b in as_region(e).terms)


@dataclass(frozen=True)
class BoundaryInteriorCounts:
    boundary: int
    interior: int

    @property
    def total(self) -> int:
        return self.boundary + self.interior


def boundary_interior(P: RationalPolygon) -> BoundaryInteriorCounts:
    """b_P and I_P: each edge contributes its lattice points minus its target vertex."""
    boundary = sum(
        count_segment(Segment(u, v, Closedness.EXCLUDE_V), 1) for u, v in P.edges()
    )
    total = count_lattice_points(P, 1)
    return BoundaryInteriorCounts(boundary=boundary, interior=total - boundary)


def transform_body(body: Body, m: Mat2) -> Body:
    """Image of a body under an invertible affine map."""
    if isinstance(body, Point2):
        return m.apply(body)
    if isinstance(body, Segment):
        return Segment(m.apply(body.u), m.apply(body.v), body.closedness)
    if isinstance(body, RationalPolygon):
        return body.transform(m)
    raise TypeError(f"not a body: {body!r}")

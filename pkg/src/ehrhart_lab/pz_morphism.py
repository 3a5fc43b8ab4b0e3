"""Skew unimodular maps and their one-sided, piecewise versions.

For a nonzero rational direction ``r`` with primitive generator ``r_p`` the
shear ``U_r(x) = x + det(r_p, x) r_p`` is an integral matrix of determinant
one fixing the line spanned by ``r``.  The one-sided map ``U_r^+`` applies it
on the closed half-plane ``det(r, x) >= 0`` and is the identity elsewhere;
``U_r^-`` applies ``U_r^{-1}`` on ``det(r, x) < 0``.  Both are bijections of
``Z^2`` (and of ``Q^2``), so they preserve lattice-point counts of every
dilate, which is what makes them useful for rearranging polygons.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .geometry import (
    Closedness,
    Mat2,
    Point2,
    RationalPolygon,
    Segment,
    convex_hull,
    det,
    translation,
)
from .lattice import Body, RegionExpression, as_region


class ZeroVector(ValueError):
    """A direction vector was zero."""


class NonLatticeBase(ValueError):
    """The base point of an affine piecewise map is not a lattice point."""


@dataclass(frozen=True)
class LatticeDirection:
    r: Point2
    r_p: tuple[int, int]
    length: Fraction

    @property
    def generator(self) -> Point2:
        return Point2(self.r_p[0], self.r_p[1])


def lattice_length(r: Point2) -> LatticeDirection:
    """``lambda(a/b, c/d) = gcd(a, c) / lcm(b, d)`` together with the primitive generator."""
    if r.is_zero:
        raise ZeroVector("the zero vector has no lattice length")
    x, y = r.x, r.y
    lam = Fraction(
        math.gcd(x.numerator, y.numerator), math.lcm(x.denominator, y.denominator)
    )
    return LatticeDirection(r, (int(x / lam), int(y / lam)), lam)


def skew_matrix(r: Point2) -> Mat2:
    """Matrix of ``U_r``; it depends only on the ray (indeed the line) of ``r``."""
    p, q = lattice_length(r).r_p
    # x + det((p, q), x) (p, q) = x + (p x2 - q x1) (p, q)
    return Mat2(1 - p * q, p * p, -q * q, 1 + p * q)


class Sign(enum.Enum):
    PLUS = "+"
    MINUS = "-"

    @classmethod
    def parse(cls, value: str | Sign) -> Sign:
        if isinstance(value, Sign):
            return value
        try:
            return cls(value)
        except ValueError:
            raise ValueError(f"sign must be '+' or '-', got {value!r}") from None


@dataclass(frozen=True)
class PiecewiseSkewMap:
    """``(U_{uv}^{sign})^k``: a shear along the line through ``u`` and ``v``.

    ``+`` acts by ``U_{v-u}^k`` where ``det(v - u, x - u) >= 0``; ``-`` acts by
    ``U_{v-u}^{-k}`` where ``det(v - u, x - u) < 0``.  Both fix the line.
    """

    u: Point2
    v: Point2
    sign: Sign = Sign.PLUS
    k: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "sign", Sign.parse(self.sign))
        if not self.u.is_integral:
            raise NonLatticeBase(f"base point {self.u} is not a lattice point")
        if self.u == self.v:
            raise ZeroVector("base and target coincide")
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError("exponent must be a positive integer")

    @classmethod
    def linear(cls, r: Point2, sign: Sign | str = Sign.PLUS, k: int = 1) -> PiecewiseSkewMap:
        return cls(Point2(0, 0), r, Sign.parse(sign), k)

    @property
    def direction(self) -> Point2:
        return self.v - self.u

    def side(self, x: Point2) -> Fraction:
        """Signed test value ``det(v - u, x - u)``."""
        return det(self.direction, x - self.u)

    def active(self, x: Point2) -> bool:
        s = self.side(x)
        return s >= 0 if self.sign is Sign.PLUS else s < 0

    def active_closed(self, x: Point2) -> bool:
        """Closure of the active half-plane (the map is continuous across the line)."""
        s = self.side(x)
        return s >= 0 if self.sign is Sign.PLUS else s <= 0

    @property
    def affine(self) -> Mat2:
        """The affine map used on the active side."""
        exponent = self.k if self.sign is Sign.PLUS else -self.k
        m = skew_matrix(self.direction) ** exponent
        return translation(self.u) @ m @ translation(-self.u)

    def __call__(self, x: Point2) -> Point2:
        return self.affine.apply(x) if self.active(x) else x


def _clip(points: Sequence[Point2], f: PiecewiseSkewMap, keep_active: bool) -> list[Point2]:
    """Sutherland-Hodgman clip of a convex cycle to one closed side of ``f``'s line."""
    sgn = 1 if (f.sign is Sign.PLUS) == keep_active else -1
    out: list[Point2] = []
    m = len(points)
    for i in range(m):
        a, b = points[i], points[(i + 1) % m]
        sa, sb = sgn * f.side(a), sgn * f.side(b)
        if sa >= 0:
            out.append(a)
        if (sa > 0 and sb < 0) or (sa < 0 and sb > 0):
            t = sa / (sa - sb)
            out.append(a + (b - a) * t)
    return convex_hull(out)


def _as_polygon(hull: list[Point2]) -> RationalPolygon | None:
    return RationalPolygon(tuple(hull)) if len(hull) >= 3 else None


def _closedness(include_u: bool, include_v: bool) -> Closedness:
    if include_u and include_v:
        return Closedness.CLOSED
    if include_u:
        return Closedness.EXCLUDE_V
    if include_v:
        return Closedness.EXCLUDE_U
    return Closedness.OPEN


def _image(body: Body, m: Mat2) -> Body:
    if isinstance(body, Point2):
        return m.apply(body)
    if isinstance(body, Segment):
        return Segment(m.apply(body.u), m.apply(body.v), body.closedness)
    return body.transform(m)


def _split(body: Body, f: PiecewiseSkewMap) -> tuple[list[tuple[int, Body]], list[tuple[int, Body]]]:
    """Split a body into (terms to map by ``f``, terms left alone).

    The two term lists together encode the body exactly; points on the fixed
    line may land in either list since ``f`` fixes them.
    """
    if isinstance(body, Point2):
        return ([(1, body)], []) if f.active(body) else ([], [(1, body)])
    if isinstance(body, Segment):
        su, sv = f.side(body.u), f.side(body.v)
        sgn = 1 if f.sign is Sign.PLUS else -1
        su, sv = sgn * su, sgn * sv
        if su >= 0 and sv >= 0:
            return [(1, body)], []
        if su <= 0 and sv <= 0:
            return [], [(1, body)]
        mid = body.u + (body.v - body.u) * (su / (su - sv))
        first = Segment(body.u, mid, _closedness(body.closedness.includes_u, True))
        second = Segment(mid, body.v, _closedness(True, body.closedness.includes_v))
        pieces = [first, second] if su > 0 else [second, first]
        return [(1, pieces[0])], [(1, pieces[1]), (-1, mid)]
    active = _as_polygon(_clip(body.vertices, f, True))
    rest = _as_polygon(_clip(body.vertices, f, False))
    if active is None:
        return [], [(1, body)]
    if rest is None:
        return [(1, body)], []
    on_line = [p for p in active.vertices if f.side(p) == 0]
    shared = Segment(min(on_line), max(on_line))
    return [(1, active)], [(1, rest), (-1, shared)]


def _points_of(body: Body) -> list[Point2]:
    if isinstance(body, Point2):
        return [body]
    if isinstance(body, Segment):
        return [body.u, body.v]
    return list(body.vertices)


def _check_disjoint_actions(body: Body, maps: Sequence[PiecewiseSkewMap]) -> None:
    """Simultaneous maps must only overlap on points that all of them fix."""
    for i, fi in enumerate(maps):
        for fj in maps[i + 1 :]:
            pts = _points_of(body)
            for f in (fi, fj):
                pts = _clip(pts, f, True)
            if any(fi.side(p) != 0 or fj.side(p) != 0 for p in pts):
                raise ValueError("piecewise maps act on overlapping parts of the region")


def apply_piecewise(
    region: RegionExpression | Body, *maps: PiecewiseSkewMap
) -> RegionExpression:
    """Image of a region under one or more one-sided shears applied simultaneously.

    Each term is split along the fixed line of each map; the active piece is
    mapped, the other piece is kept, and the shared segment on the fixed line
    is subtracted once so no point is counted twice.  Several maps may be given
    when their active regions meet the region only along their fixed lines.
    """
    if not maps:
        raise ValueError("at least one map is required")
    expr = as_region(region)
    if len(maps) > 1:
        for body in expr.bodies():
            _check_disjoint_actions(body, maps)
    done: list[tuple[int, Body]] = []
    pending: list[tuple[int, Body]] = list(expr.terms)
    for f in maps:
        m = f.affine
        still: list[tuple[int, Body]] = []
        for mult, body in pending:
            mapped, kept = _split(body, f)
            done.extend((mult * c, _image(b, m)) for c, b in mapped)
            still.extend((mult * c, b) for c, b in kept)
        pending = still
    return RegionExpression(tuple(done + pending))


def apply_affine_piecewise(
    region: RegionExpression | Body,
    u: Point2,
    v: Point2,
    sign: Sign | str = Sign.PLUS,
    k: int = 1,
) -> RegionExpression:
    """``(U_{uv}^{sign})^k``: the linear one-sided shear conjugated by translation to ``u``."""
    return apply_piecewise(region, PiecewiseSkewMap(u, v, Sign.parse(sign), k))


"""Exact planar geometry over the rationals.

Everything here works on :class:`fractions.Fraction`; no floating point is
used anywhere.  Polygons are stored in a canonical form (counterclockwise,
starting at the lexicographically least vertex) so two polygons are equal
exactly when they have the same vertex cycle.
"""
from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

Rational = Fraction
RationalLike = Union[int, Fraction, str]

_RATIONAL_RE = re.compile(r"[+-]?\d+(/\d+)?")


class DegenerateInput(ValueError):
    """Raised when a point set does not span a 2-dimensional polygon."""


def as_rational(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction or ``"p"``/``"p/q"`` string to a reduced Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not _RATIONAL_RE.fullmatch(text):
            raise ValueError(f"not a rational literal: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def lcm_all(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, v)
    return out


def format_rational(value: Fraction) -> str:
    return str(value)


@dataclass(frozen=True, order=True, slots=True)
class Point2:
    x: Fraction
    y: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", as_rational(self.x))
        object.__setattr__(self, "y", as_rational(self.y))

    def __add__(self, other: Point2) -> Point2:
        return Point2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Point2) -> Point2:
        return Point2(self.x - other.x, self.y - other.y)

    def __neg__(self) -> Point2:
        return Point2(-self.x, -self.y)

    def __mul__(self, k: RationalLike) -> Point2:
        k = as_rational(k)
        return Point2(self.x * k, self.y * k)

    __rmul__ = __mul__

    def __truediv__(self, k: RationalLike) -> Point2:
        k = as_rational(k)
        return Point2(self.x / k, self.y / k)

    def __iter__(self) -> Iterator[Fraction]:
        yield self.x
        yield self.y

    def __str__(self) -> str:
        return f"({self.x}, {self.y})"

    def dot(self, other: Point2) -> Fraction:
        return self.x * other.x + self.y * other.y

    def cross(self, other: Point2) -> Fraction:
        """``det(self, other)`` with the two vectors as columns."""
        return self.x * other.y - self.y * other.x

    @property
    def is_integral(self) -> bool:
        return self.x.denominator == 1 and self.y.denominator == 1

    @property
    def denominator(self) -> int:
        """Least k >= 1 with k * self in Z^2."""
        return math.lcm(self.x.denominator, self.y.denominator)

    @property
    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0


ORIGIN = Point2(0, 0)


def point(x: RationalLike, y: RationalLike) -> Point2:
    return Point2(as_rational(x), as_rational(y))


def det(r: Point2, x: Point2) -> Fraction:
    return r.cross(x)


def orientation(a: Point2, b: Point2, c: Point2) -> int:
    """Sign of the turn a -> b -> c: +1 left, -1 right, 0 collinear."""
    v = (b - a).cross(c - a)
    return (v > 0) - (v < 0)


@dataclass(frozen=True)
class Mat2:
    """2x2 rational matrix ``[[a, b], [c, d]]`` with an optional translation.

    With a translation ``t`` the matrix acts as the affine map ``x -> M x + t``.
    """

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    translation: Point2 | None = None

    def __post_init__(self) -> None:
        for name in "abcd":
            object.__setattr__(self, name, as_rational(getattr(self, name)))

    @classmethod
    def identity(cls) -> Mat2:
        return cls(1, 0, 0, 1)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RationalLike]]) -> Mat2:
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @classmethod
    def from_columns(cls, col0: Point2, col1: Point2) -> Mat2:
        return cls(col0.x, col1.x, col0.y, col1.y)

    @property
    def rows(self) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
        return ((self.a, self.b), (self.c, self.d))

    @property
    def linear(self) -> Mat2:
        return Mat2(self.a, self.b, self.c, self.d)

    @property
    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    @property
    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in (self.a, self.b, self.c, self.d))

    @property
    def is_unimodular(self) -> bool:
        """Integer entries and determinant +1 (translation must be integral too)."""
        if self.translation is not None and not self.translation.is_integral:
            return False
        return self.is_integral and self.det == 1

    def apply(self, p: Point2) -> Point2:
        q = Point2(self.a * p.x + self.b * p.y, self.c * p.x + self.d * p.y)
        if self.translation is not None:
            q = q + self.translation
        return q

    __call__ = apply

    def __matmul__(self, other):
        if isinstance(other, Point2):
            return self.apply(other)
        if isinstance(other, Mat2):
            m = Mat2(
                self.a * other.a + self.b * other.c,
                self.a * other.b + self.b * other.d,
                self.c * other.a + self.d * other.c,
                self.c * other.b + self.d * other.d,
            )
            t = None
            if other.translation is not None:
                t = self.linear.apply(other.translation)
            if self.translation is not None:
                t = self.translation if t is None else t + self.translation
            if t is not None:
                m = Mat2(m.a, m.b, m.c, m.d, t)
            return m
        return NotImplemented

    def inverse(self) -> Mat2:
        dt = self.det
        if dt == 0:
            raise ZeroDivisionError("singular matrix")
        inv = Mat2(self.d / dt, -self.b / dt, -self.c / dt, self.a / dt)
        if self.translation is not None:
            t = -inv.apply(self.translation)
            inv = Mat2(inv.a, inv.b, inv.c, inv.d, t)
        return inv

    def __pow__(self, k: int) -> Mat2:
        base = self if k >= 0 else self.inverse()
        out = Mat2.identity()
        for _ in range(abs(k)):
            out = base @ out
        return out

    def __str__(self) -> str:
        s = f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"
        if self.translation is not None:
            s += f" + {self.translation}"
        return s


def translation(t: Point2) -> Mat2:
    return Mat2(1, 0, 0, 1, t)


def convex_hull(points: Iterable[Point2]) -> list[Point2]:
    """Monotone-chain hull: counterclockwise corners, lexicographically least first.

    Collinear boundary points are dropped.  Returns 0, 1 or 2 points when the
    input does not span the plane.
    """
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def half(seq: Sequence[Point2]) -> list[Point2]:
        chain: list[Point2] = []
        for p in seq:
            while len(chain) >= 2 and orientation(chain[-2], chain[-1], p) <= 0:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(pts[::-1])
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return hull[:1]
    return hull


@dataclass(frozen=True)
class RationalPolygon:
    """Strictly convex rational polygon, counterclockwise, canonical start vertex."""

    vertices: tuple[Point2, ...]

    def __post_init__(self) -> None:
        vs = tuple(v if isinstance(v, Point2) else Point2(*v) for v in self.vertices)
        if len(vs) < 3:
            raise DegenerateInput("a polygon needs at least 3 vertices")
        if len(set(vs)) != len(vs):
            raise DegenerateInput("repeated vertex")
        m = len(vs)
        for i in range(m):
            if orientation(vs[i - 1], vs[i], vs[(i + 1) % m]) <= 0:
                raise DegenerateInput(
                    "vertices must form a strictly convex counterclockwise cycle"
                )
        start = vs.index(min(vs))
        object.__setattr__(self, "vertices", vs[start:] + vs[:start])

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self) -> Iterator[Point2]:
        return iter(self.vertices)

    def edges(self) -> Iterator[tuple[Point2, Point2]]:
        vs = self.vertices
        for i in range(len(vs)):
            yield vs[i], vs[(i + 1) % len(vs)]

    @property
    def denominator(self) -> int:
        """lcm of all vertex coordinate denominators."""
        return lcm_all(v.denominator for v in self.vertices)

    @property
    def is_integral(self) -> bool:
        return all(v.is_integral for v in self.vertices)

    def bounding_box(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        xs = [v.x for v in self.vertices]
        ys = [v.y for v in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def translate(self, t: Point2) -> RationalPolygon:
        return RationalPolygon(tuple(v + t for v in self.vertices))

    def transform(self, m: Mat2) -> RationalPolygon:
        """Image under an invertible (affine) map; reorients if det < 0."""
        return make_polygon([m.apply(v) for v in self.vertices])

    def __str__(self) -> str:
        return "conv{" + ", ".join(str(v) for v in self.vertices) + "}"


def make_polygon(points: Iterable[RationalLike | Point2 | Sequence]) -> RationalPolygon:
    """Canonical convex hull of a point set.

    Raises:
        DegenerateInput: fewer than three distinct points, or all collinear.
    """
    pts = [p if isinstance(p, Point2) else point(*p) for p in points]
    hull = convex_hull(pts)
    if len(hull) < 3:
        raise DegenerateInput(f"points span no polygon: {[str(p) for p in set(pts)]}")
    return RationalPolygon(tuple(hull))


def area(P: RationalPolygon) -> Fraction:
    vs = P.vertices
    twice = sum(vs[i].cross(vs[(i + 1) % len(vs)]) for i in range(len(vs)))
    return twice / 2


def dilate(P: RationalPolygon, n: int) -> RationalPolygon:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"dilation factor must be a positive integer, got {n!r}")
    return RationalPolygon(tuple(v * n for v in P.vertices))


class Location(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


def locate(P: RationalPolygon, p: Point2) -> Location:
    """Classify ``p`` by exact sign tests against every edge."""
    on_edge = False
    for u, v in P.edges():
        s = (v - u).cross(p - u)
        if s < 0:
            return Location.OUTSIDE
        if s == 0:
            on_edge = True
    return Location.BOUNDARY if on_edge else Location.INTERIOR


class Closedness(enum.Enum):
    CLOSED = "closed"
    EXCLUDE_U = "half-open-excluding-u"
    EXCLUDE_V = "half-open-excluding-v"
    OPEN = "open"

    @property
    def includes_u(self) -> bool:
        return self in (Closedness.CLOSED, Closedness.EXCLUDE_V)

    @property
    def includes_v(self) -> bool:
        return self in (Closedness.CLOSED, Closedness.EXCLUDE_U)


@dataclass(frozen=True)
class Segment:
    u: Point2
    v: Point2
    closedness: Closedness = Closedness.CLOSED

    def __post_init__(self) -> None:
        if self.u == self.v:
            raise DegenerateInput("segment endpoints coincide")

    def dilate(self, n: int) -> Segment:
        return Segment(self.u * n, self.v * n, self.closedness)

    def __str__(self) -> str:
        left = "[" if self.closedness.includes_u else "("
        right = "]" if self.closedness.includes_v else ")"
        return f"{left}{self.u}, {self.v}{right}"


@dataclass(frozen=True)
class Degenerate:
    """A convex hull that is not 2-dimensional."""

    kind: str  # "empty", "point" or "segment"
    points: tuple[Point2, ...]


def lattice_points(P: RationalPolygon) -> list[Point2]:
    """All lattice points of the closed polygon, by bounding-box search."""
    xmin, ymin, xmax, ymax = P.bounding_box()
    found = []
    for x in range(math.ceil(xmin), math.floor(xmax) + 1):
        for y in range(math.ceil(ymin), math.floor(ymax) + 1):
            p = Point2(Fraction(x), Fraction(y))
            if locate(P, p) is not Location.OUTSIDE:
                found.append(p)
    return found


def integral_hull(P: RationalPolygon) -> RationalPolygon | Degenerate:
    hull = convex_hull(lattice_points(P))
    if not hull:
        return Degenerate("empty", ())
    if len(hull) == 1:
        return Degenerate("point", tuple(hull))
    if len(hull) == 2:
        return Degenerate("segment", tuple(hull))
    return RationalPolygon(tuple(hull))

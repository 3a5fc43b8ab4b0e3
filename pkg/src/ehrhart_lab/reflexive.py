"""Polar duality, reflexive polygons and words in the shears ``A^a`` and ``B``.

A closed boundary walk ``v_0 v_1 ... v_{n-1}`` of a (pseudo-)reflexive polygon
is encoded by letters ``(a_i, b_i)``: ``a_i`` is the lattice length of the edge
``v_{i-1} v_i`` and ``b_i`` is ``den(v_i)`` times the lattice length of the
dual edge with outer normal ``v_i``.  Conversely the recursion

    [v_i; d_i] = B^{b_i} A^{a_i} [v_{i-1}; d_{i-1}],   v_0 = (1, 0), d_0 = (0, 1)

(rows stacked, multiplied on the left) rebuilds the walk from the word.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .ehrhart import pip_report
from .geometry import (
    ORIGIN,
    Location,
    Mat2,
    Point2,
    RationalPolygon,
    as_rational,
    det,
    lattice_points,
    locate,
    make_polygon,
    point,
)
from .lattice import boundary_interior
from .pz_morphism import lattice_length
from .scans import iter_lattice_polygons


class OriginNotInterior(ValueError):
    pass


class NoLatticeVertex(ValueError):
    pass


class InvalidWord(ValueError):
    pass


class OriginOnPath(ValueError):
    pass


def _require_origin_inside(P: RationalPolygon) -> None:
    if locate(P, ORIGIN) is not Location.INTERIOR:
        raise OriginNotInterior(f"origin is not in the interior of {P}")


def _outer_normal(u: Point2, v: Point2) -> tuple[int, int]:
    """Primitive integral outer normal of the counterclockwise edge ``u -> v``."""
    p, q = lattice_length(v - u).r_p
    return q, -p


def polar_dual(P: RationalPolygon) -> RationalPolygon:
    """``{y : <x, y> <= 1 for all x in P}``; one vertex ``nu / c`` per edge ``<nu, x> = c``."""
    _require_origin_inside(P)
    verts = []
    for u, v in P.edges():
        nx, ny = _outer_normal(u, v)
        c = nx * u.x + ny * u.y
        verts.append(point(Fraction(nx) / c, Fraction(ny) / c))
    return make_polygon(verts)


@dataclass(frozen=True)
class ReflexivityReport:
    reflexive: bool
    pseudo_reflexive: bool
    twelve: bool
    boundary: int
    dual_boundary: int


def reflexivity_report(P: RationalPolygon) -> ReflexivityReport:
    dual = polar_dual(P)
    b = boundary_interior(P).boundary
    b_dual = boundary_interior(dual).boundary
    dual_integral = dual.is_integral
    return ReflexivityReport(
        reflexive=P.is_integral and dual_integral,
        pseudo_reflexive=dual_integral and pip_report(P).is_pip,
        twelve=b + b_dual == 12,
        boundary=b,
        dual_boundary=b_dual,
    )


# ---------------------------------------------------------------------------
# Generators and words


def gen_a(a: Fraction | int = 1) -> Mat2:
    return Mat2(1, a, 0, 1)


def gen_b(b: int = 1) -> Mat2:
    return Mat2(1, 0, -b, 1)


def den(p: Point2) -> int:
    """Least common denominator of the coordinates."""
    return p.denominator


@dataclass(frozen=True)
class GeneratorWord:
    """Letters ``(a_i, b_i)`` for ``i = 1..n``, i.e. ``B^{b_n} A^{a_n} ... B^{b_1} A^{a_1}``.

    ``letters[0]`` is ``(a_1, b_1)``, the rightmost factor.
    """

    letters: tuple[tuple[Fraction, int], ...]

    def __post_init__(self) -> None:
        clean = []
        for a, b in self.letters:
            a = as_rational(a) if not isinstance(a, Fraction) else a
            if a <= 0 or not isinstance(b, int) or b < 1:
                raise InvalidWord(f"letter ({a}, {b}) needs a > 0 and an integer b >= 1")
            clean.append((a, b))
        object.__setattr__(self, "letters", tuple(clean))

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def a_sum(self) -> Fraction:
        return sum((a for a, _ in self.letters), Fraction(0))

    @property
    def b_sum(self) -> int:
        return sum(b for _, b in self.letters)

    def validity_problems(self) -> list[str]:
        """Reasons the word cannot be fed to the reconstruction (empty if valid)."""
        problems = []
        if self.a_sum.denominator != 1:
            problems.append(f"sum of a_i is {self.a_sum}, not an integer")
        partial = Fraction(0)
        for i, (a, b) in enumerate(self.letters, start=1):
            partial += a
            need = partial.denominator**2
            if b % need:
                problems.append(f"b_{i} = {b} is not divisible by {need}")
        return problems

    @property
    def is_valid(self) -> bool:
        return not self.validity_problems()

    def to_json(self) -> dict:
        return {
            "order": "paper-right-to-left",
            "letters": [{"a": str(a), "b": b} for a, b in reversed(self.letters)],
        }

    @classmethod
    def from_json(cls, data: dict) -> GeneratorWord:
        order = data.get("order", "paper-right-to-left")
        letters = [(as_rational(str(x["a"])), int(x["b"])) for x in data["letters"]]
        if order == "paper-right-to-left":
            letters.reverse()
        elif order != "application":
            raise InvalidWord(f"unknown letter order {order!r}")
        return cls(tuple(letters))

    def __str__(self) -> str:
        return " ".join(f"B^{b} A^{a}" for a, b in reversed(self.letters))


def word_product(w: GeneratorWord) -> Mat2:
    """``B^{b_n} A^{a_n} ... B^{b_1} A^{a_1}`` in exact arithmetic."""
    out = Mat2.identity()
    for a, b in w.letters:
        out = gen_b(b) @ gen_a(a) @ out
    return out


def _step(a: Fraction, b: int, v: Point2, d: Point2) -> tuple[Point2, Point2]:
    # A^a [v; d] = [v + a d; d], then B^b [v; d] = [v; d - b v].
    v = v + d * a
    return v, d - v * b


@dataclass(frozen=True)
class PathReconstruction:
    vertices: tuple[Point2, ...]
    directions: tuple[Point2, ...]
    winding: int
    closes: bool

    def polygon(self) -> RationalPolygon:
        return make_polygon(self.vertices)


def winding_number(path: Sequence[Point2]) -> int:
    """Winding number of the closed path ``p_0 p_1 ... p_{m-1} p_0`` about the origin.

    Counts signed crossings of the positive x-axis with exact predicates.
    """
    total = 0
    m = len(path)
    for i in range(m):
        p, q = path[i], path[(i + 1) % m]
        cr = det(p, q)
        if cr == 0 and p.dot(q) <= 0:
            raise OriginOnPath(f"segment {p} -> {q} passes through the origin")
        if p.y <= 0 < q.y and cr > 0:
            total += 1
        elif q.y <= 0 < p.y and cr < 0:
            total -= 1
    return total


def reconstruct_path(w: GeneratorWord) -> PathReconstruction:
    problems = w.validity_problems()
    if problems:
        raise InvalidWord("; ".join(problems))
    v, d = point(1, 0), point(0, 1)
    vertices, directions = [v], [d]
    for a, b in w.letters:
        v, d = _step(a, b, v, d)
        vertices.append(v)
        directions.append(d)
    closes = vertices[-1] == vertices[0] and directions[-1] == directions[0]
    vertices.pop()
    directions.pop()
    return PathReconstruction(tuple(vertices), tuple(directions), winding_number(vertices), closes)


def _cycle_from(P: RationalPolygon, start: int) -> list[Point2]:
    n = len(P)
    return [P.vertices[(start + i) % n] for i in range(n)]


def extract_word(P: RationalPolygon) -> GeneratorWord:
    """Word of a (pseudo-)reflexive polygon, read counterclockwise from a lattice vertex.

    The start vertex ``v`` must have primitive outgoing edge direction ``d`` with
    ``det(v, d) = 1``, so that the lattice automorphism ``[v d]^{-1}`` moves it to
    ``v_0 = (1, 0)``, ``d_0 = (0, 1)``.
    """
    dual = polar_dual(P)
    n = len(P)
    for j in range(n):
        v, nxt = P.vertices[j], P.vertices[(j + 1) % n]
        if not v.is_integral:
            continue
        d = lattice_length(nxt - v).generator
        if det(v, d) == 1:
            break
    else:
        raise NoLatticeVertex(f"no lattice vertex of {P} can serve as the starting vertex")
    cycle = _cycle_from(P, j)
    letters = []
    for i in range(1, n + 1):
        vi, prev = cycle[i % n], cycle[i - 1]
        a = lattice_length(vi - prev).length
        b_dual = _dual_edge_length(dual, vi)
        b = den(vi) * b_dual
        if b.denominator != 1:
            raise NoLatticeVertex(f"dual edge at {vi} has non-integral weight {b}")
        letters.append((a, int(b)))
    return GeneratorWord(tuple(letters))


def _dual_edge_length(dual: RationalPolygon, normal: Point2) -> Fraction:
    """Lattice length of the edge ``{y in dual : <normal, y> = 1}``."""
    on = [y for y in dual.vertices if normal.dot(y) == 1]
    if len(on) != 2:
        raise ValueError(f"{normal} is not the outer normal of a dual edge")
    return lattice_length(on[1] - on[0]).length


def normalizing_map(P: RationalPolygon) -> Mat2:
    """The lattice automorphism used by :func:`extract_word` to place the start vertex at (1, 0)."""
    n = len(P)
    for j in range(n):
        v, nxt = P.vertices[j], P.vertices[(j + 1) % n]
        if v.is_integral:
            d = lattice_length(nxt - v).generator
            if det(v, d) == 1:
                return Mat2.from_columns(v, d).inverse()
    raise NoLatticeVertex(f"no usable lattice vertex in {P}")


def linear_equivalent(P: RationalPolygon, Q: RationalPolygon) -> Mat2 | None:
    """A matrix in GL2(Z) carrying ``P`` onto ``Q`` (origin fixed), or None."""
    if len(P) != len(Q):
        return None
    n = len(P)
    target = set(Q.vertices)
    # Two consecutive vertices spanning the plane pin the map down.
    for i in range(n):
        p0, p1 = P.vertices[i], P.vertices[(i + 1) % n]
        if det(p0, p1) != 0:
            break
    else:
        return None
    base_inv = Mat2.from_columns(p0, p1).inverse()
    for j in range(n):
        for step in (1, -1):
            q0, q1 = Q.vertices[j], Q.vertices[(j + step) % n]
            M = Mat2.from_columns(q0, q1) @ base_inv
            if M.is_integral and abs(M.det) == 1 and {M.apply(p) for p in P.vertices} == target:
                return M
    return None


def _invariant_key(P: RationalPolygon) -> tuple:
    counts = boundary_interior(P)
    return (len(P), counts.boundary, counts.interior)


def equivalence_classes(polygons: Iterable[RationalPolygon]) -> list[RationalPolygon]:
    """One representative per GL2(Z) class (origin fixed), in first-seen order."""
    reps: dict[tuple, list[RationalPolygon]] = {}
    order: list[RationalPolygon] = []
    for P in polygons:
        bucket = reps.setdefault(_invariant_key(P), [])
        if any(linear_equivalent(P, R) is not None for R in bucket):
            continue
        bucket.append(P)
        order.append(P)
    return order


def reflexive_polygons(bound: int = 3) -> list[RationalPolygon]:
    """Integral polygons with exactly one interior lattice point, translated so the
    point is the origin, with vertices in ``[-bound, bound]^2``; one per GL2(Z) class.
    """
    found = []
    for verts, I, _ in iter_lattice_polygons(2 * bound, 1):
        if I != 1:
            continue
        P = make_polygon([point(x, y) for x, y in verts])
        center = _interior_lattice_point(P)
        Q = P.translate(-center)
        if all(abs(c) <= bound for v in Q.vertices for c in v):
            found.append(Q)
    found.sort(key=lambda P: (len(P), P.vertices))
    return equivalence_classes(found)


def _interior_lattice_point(P: RationalPolygon) -> Point2:
    inside = [p for p in lattice_points(P) if locate(P, p) is Location.INTERIOR]
    if len(inside) != 1:
        raise ValueError(f"{P} has {len(inside)} interior lattice points")
    return inside[0]


def twelve_sum(w: GeneratorWord) -> Fraction:
    return w.a_sum + w.b_sum

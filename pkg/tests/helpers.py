"""Shared test utilities: a seeded random polygon suite and an independent counter."""
from __future__ import annotations

import math
import random
from fractions import Fraction

from hypothesis import assume, strategies as st

from ehrhart_lab.geometry import (
    DegenerateInput,
    Location,
    Point2,
    RationalPolygon,
    convex_hull,
    dilate,
    locate,
    make_polygon,
)

SUITE_SEED = 20240611
SUITE_SIZE = 200


def random_polygon(rng: random.Random, max_den: int = 6, max_coord: int = 8) -> RationalPolygon:
    """Hull of 3 to 6 random points with denominators <= max_den and |coords| <= max_coord."""
    while True:
        pts = []
        for _ in range(rng.randint(3, 6)):
            q = rng.randint(1, max_den)
            pts.append(
                Point2(
                    Fraction(rng.randint(-max_coord * q, max_coord * q), q),
                    Fraction(rng.randint(-max_coord * q, max_coord * q), q),
                )
            )
        if len(convex_hull(pts)) >= 3:
            return make_polygon(pts)


def random_suite(size: int = SUITE_SIZE, seed: int = SUITE_SEED) -> list[RationalPolygon]:
    rng = random.Random(seed)
    return [random_polygon(rng) for _ in range(size)]


def brute_count(P: RationalPolygon, n: int) -> int:
    """Pure-Python count: classify every integer point of the bounding box of nP."""
    Q = dilate(P, n)
    xmin, ymin, xmax, ymax = Q.bounding_box()
    return sum(
        locate(Q, Point2(x, y)) is not Location.OUTSIDE
        for x in range(math.floor(xmin), math.ceil(xmax) + 1)
        for y in range(math.floor(ymin), math.ceil(ymax) + 1)
    )


@st.composite
def rational_polygons(draw, max_den: int = 6, max_coord: int = 8, max_points: int = 6):
    def coordinate():
        q = draw(st.integers(1, max_den))
        return Fraction(draw(st.integers(-max_coord * q, max_coord * q)), q)

    pts = [Point2(coordinate(), coordinate()) for _ in range(draw(st.integers(3, max_points)))]
    try:
        return make_polygon(pts)
    except DegenerateInput:
        assume(False)

from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ehrhart_lab.constructions import heptagon_h, pip_b1_pipeline
from ehrhart_lab.geometry import (
    Location,
    Mat2,
    Point2,
    RationalPolygon,
    Segment,
    locate,
    make_polygon,
    point,
)
from ehrhart_lab.lattice import RegionExpression, count_lattice_points, count_region, oracle_count
from ehrhart_lab.pz_morphism import (
    NonLatticeBase,
    PiecewiseSkewMap,
    Sign,
    ZeroVector,
    apply_affine_piecewise,
    apply_piecewise,
    lattice_length,
    skew_matrix,
)

from helpers import rational_polygons

F = Fraction


def test_lattice_length_examples():
    d = lattice_length(point(3, 0))
    assert (d.length, d.r_p) == (3, (1, 0))
    d = lattice_length(point(F(2, 3), F(4, 3)))
    assert (d.length, d.r_p) == (F(2, 3), (1, 2))
    d = lattice_length(point(F(1, 2), F(1, 3)))
    assert (d.length, d.r_p) == (F(1, 6), (3, 2))
    assert d.generator * d.length == point(F(1, 2), F(1, 3))
    with pytest.raises(ZeroVector):
        lattice_length(point(0, 0))


def test_skew_matrix_generators():
    assert skew_matrix(point(1, 0)) == Mat2(1, 1, 0, 1)
    assert skew_matrix(point(0, -1)) == Mat2(1, 0, -1, 1)


def test_invalid_maps():
    with pytest.raises(NonLatticeBase):
        PiecewiseSkewMap(point(F(1, 2), 0), point(1, 1))
    with pytest.raises(ZeroVector):
        PiecewiseSkewMap(point(1, 1), point(1, 1))
    with pytest.raises(ValueError):
        PiecewiseSkewMap(point(0, 0), point(1, 1), Sign.PLUS, 0)
    with pytest.raises(ValueError):
        Sign.parse("*")


def test_map_whose_line_misses_the_polygon():
    P = make_polygon([(1, 1), (2, 1), (1, 2)])
    plus = apply_piecewise(P, PiecewiseSkewMap.linear(point(1, 0), "+"))
    assert len(plus) == 1 and plus.terms[0][1] == P.transform(skew_matrix(point(1, 0)))
    minus = apply_piecewise(P, PiecewiseSkewMap.linear(point(1, 0), "-"))
    assert minus.terms == ((1, P),)


def test_affine_at_origin_matches_linear():
    P = make_polygon([(-1, -1), (2, 0), (0, F(3, 2))])
    f = PiecewiseSkewMap.linear(point(1, 2), "-", 2)
    assert apply_affine_piecewise(P, point(0, 0), point(1, 2), "-", 2) == apply_piecewise(P, f)


def test_b1_first_stage_preserves_counts_at_three():
    T1, T2, _, _ = pip_b1_pipeline(3)
    assert all(count_region(T1, n) == count_region(T2, n) for n in range(1, 11))


def test_heptagon_pieces_map_to_triangles():
    hept = heptagon_h(3)
    V = hept.vertices
    assert hept.T1.transform(hept.U1.affine) == make_polygon([V["u1"], hept.v, V["w"]])
    assert hept.T2.transform(hept.U2.affine) == make_polygon([V["u2"], hept.v, V["w"]])
    # The maps are affine, so only the undilated count is preserved.
    image = hept.image_T1()
    assert count_region(image, 1) == count_lattice_points(hept.T1, 1)


def test_overlapping_simultaneous_maps_are_rejected():
    P = make_polygon([(-2, -2), (2, -2), (2, 2), (-2, 2)])
    f = PiecewiseSkewMap.linear(point(1, 0), "+")
    g = PiecewiseSkewMap.linear(point(0, 1), "-")
    with pytest.raises(ValueError):
        apply_piecewise(P, f, g)


def _contains(body, y: Point2) -> bool:
    if isinstance(body, Point2):
        return body == y
    if isinstance(body, Segment):
        w = body.v - body.u
        if w.cross(y - body.u) != 0:
            return False
        t = (y - body.u).dot(w) / w.dot(w)
        lo_ok = t > 0 or (t == 0 and body.closedness.includes_u)
        hi_ok = t < 1 or (t == 1 and body.closedness.includes_v)
        return lo_ok and hi_ok
    return locate(body, y) is not Location.OUTSIDE


def _lattice_points(P: RationalPolygon) -> list[Point2]:
    xmin, ymin, xmax, ymax = P.bounding_box()
    return [
        Point2(x, y)
        for x in range(math.ceil(xmin), math.floor(xmax) + 1)
        for y in range(math.ceil(ymin), math.floor(ymax) + 1)
        if locate(P, Point2(x, y)) is not Location.OUTSIDE
    ]


directions = st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(1, 3)).filter(
    lambda t: (t[0], t[1]) != (0, 0)
)


@settings(max_examples=50, deadline=None)
@given(
    rational_polygons(max_den=4, max_coord=3),
    directions,
    st.sampled_from(["+", "-"]),
    st.integers(1, 3),
)
def test_piecewise_maps_preserve_counts(P, r, sign, k):
    f = PiecewiseSkewMap.linear(point(F(r[0], r[2]), F(r[1], r[2])), sign, k)
    image = apply_piecewise(P, f)
    for n in range(1, 9):
        assert count_region(image, n) == oracle_count(P, n)
    # Pointwise: the signed indicator of the expression is the indicator of f(P ∩ Z^2).
    targets = {f(x) for x in _lattice_points(P)}
    candidates = set(targets)
    for body in image.bodies():
        if isinstance(body, RationalPolygon):
            candidates.update(_lattice_points(body))
    for y in candidates:
        weight = sum(m for m, body in image.terms if _contains(body, y))
        assert weight == (1 if y in targets else 0)


@settings(max_examples=40, deadline=None)
@given(directions, st.integers(-5, 5), st.integers(-5, 5))
def test_skew_matrix_invariants(r, x1, x2):
    rv = point(F(r[0], r[2]), F(r[1], r[2]))
    U = skew_matrix(rv)
    assert U.det == 1 and U.is_integral
    assert U.apply(rv) == rv
    assert skew_matrix(-rv) == U
    x = point(x1, x2)
    p, q = lattice_length(rv).r_p
    assert U.apply(x) == x + point(p, q) * (p * x2 - q * x1)


@settings(max_examples=30, deadline=None)
@given(directions, st.sampled_from(["+", "-"]), st.integers(1, 3), st.integers(-6, 6), st.integers(-6, 6))
def test_one_sided_maps_commute_with_dilation(r, sign, k, x1, x2):
    f = PiecewiseSkewMap.linear(point(r[0], r[1]), sign, k)
    x = point(x1, x2)
    for n in (2, 3):
        assert f(x * n) == f(x) * n

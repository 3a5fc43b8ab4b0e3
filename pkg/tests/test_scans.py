from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ehrhart_lab.ehrhart import pip_report, scott_admissible
from ehrhart_lab.geometry import make_polygon
from ehrhart_lab.lattice import boundary_interior
from ehrhart_lab.scans import (
    PIP_SCAN_HEADER,
    canonical_form,
    iter_lattice_polygons,
    lattice_counts,
    pip_scan,
    pip_scan_csv,
    realizable_pairs,
    to_polygon,
)


def test_canonical_form_is_invariant():
    tri = ((0, 0), (3, 1), (1, 2))
    images = [
        tuple((x + 5, y - 2) for x, y in tri),
        tuple((-x, y) for x, y in tri),
        tuple((y, x) for x, y in tri),
        tuple((-y, -x) for x, y in tri),
    ]
    assert all(canonical_form(t) == canonical_form(tri) for t in images)


def test_lattice_counts_uses_pick():
    assert lattice_counts(((0, 0), (3, 0), (0, 3))) == (1, 9, 9)
    assert lattice_counts(((0, 0), (1, 0), (1, 1), (0, 1))) == (0, 4, 2)


def test_small_grid_enumeration():
    polys = list(iter_lattice_polygons(1, 0))
    # In the unit square: the unimodular triangle and the square itself.
    assert sorted(len(P) for P, _, _ in polys) == [3, 4]
    for P, I, b in iter_lattice_polygons(3, 1):
        counts = boundary_interior(to_polygon(P))
        assert (counts.interior, counts.boundary) == (I, b) and I <= 1


def test_realizable_pairs_match_predicate_on_small_grid():
    pairs = realizable_pairs(6, 2)
    for I in range(3):
        for b in range(3, 11):
            if scott_admissible(I, b) and b <= 8:
                assert (I, b) in pairs
            if not scott_admissible(I, b):
                assert (I, b) not in pairs


def test_empty_scan_has_only_a_header():
    assert pip_scan(0, 0) == [] and pip_scan(3, 0) == []
    assert pip_scan_csv([]) == PIP_SCAN_HEADER + "\n"


def test_integral_scan_finds_lattice_triangles():
    hits = pip_scan(1, 1)
    assert hits and all(all(v.is_integral for v in h.vertices) for h in hits)
    assert all(scott_admissible(h.interior, h.boundary) for h in hits)
    assert (0, 3) in {(h.interior, h.boundary) for h in hits}


def test_scan_hits_are_pips_and_stable():
    hits = pip_scan(2, 1)
    assert pip_scan_csv(hits) == pip_scan_csv(pip_scan(2, 1))
    for h in hits[:: max(1, len(hits) // 40)]:
        P = make_polygon(h.vertices)
        report = pip_report(P)
        assert report.is_pip and (report.interior, report.boundary) == (h.interior, h.boundary)
        assert all(abs(c) <= 1 for v in h.vertices for c in (v.x, v.y))


def test_scan_finds_one_point_pip_when_large_enough():
    hits = pip_scan(3, 2)
    pairs = {(h.interior, h.boundary) for h in hits}
    assert (1, 1) in pairs
    assert not any(b == 0 for _, b in pairs) and (0, 1) not in pairs and (0, 2) not in pairs


def test_short_dilate_bound_only_adds_candidates():
    exact = set(pip_scan(2, 1))
    loose = set(pip_scan(2, 1, dilate_bound=2))
    assert exact <= loose


def test_scan_rejects_negative_bounds():
    with pytest.raises(ValueError):
        pip_scan(-1, 2)
    with pytest.raises(ValueError):
        pip_scan(2, 1, dilate_bound=0)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=3, max_size=7))
def test_lattice_counts_agree_with_exact_counter(points):
    try:
        P = make_polygon(points)
    except ValueError:
        return
    verts = tuple((int(v.x), int(v.y)) for v in P)
    I, b, a2 = lattice_counts(verts)
    counts = boundary_interior(P)
    assert (I, b) == (counts.interior, counts.boundary)
    assert Fraction(a2, 2) > 0

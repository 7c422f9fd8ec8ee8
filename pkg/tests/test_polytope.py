from __future__ import annotations

from fractions import Fraction
from itertools import product

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from polymut.exact import is_unimodular, mat_mul, vec_mat
from polymut.polytope import (
    EmptyPolytope,
    NonLatticePolytope,
    NotInterior,
    SearchInconclusive,
    UnboundedPolyhedron,
    affine_unimodular_equivalent,
    apply_affine,
    box,
    count_lattice_points,
    dilate,
    dual_at,
    dumps,
    ehrhart_counts,
    extreme_rays,
    from_halfspaces,
    hull,
    interior_lattice_points,
    intersect,
    lattice_points,
    loads,
    minkowski_sum,
    polar,
    projected_volume,
    relative_volume,
    slice_polytope,
    translate,
    triangulation,
    volume,
)

F = Fraction
coords = st.integers(min_value=-4, max_value=4)


def point_sets(dim, min_size=1, max_size=7):
    return st.lists(st.tuples(*[coords] * dim), min_size=min_size, max_size=max_size)


@st.composite
def unimodular(draw, n):
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(draw(st.integers(0, 5))):
        i = draw(st.integers(0, n - 1))
        j = draw(st.integers(0, n - 1))
        if i == j:
            m = [[-x if r == i else x for x in row] for r, row in enumerate(m)]
            continue
        c = draw(st.integers(-2, 2))
        m[i] = [a + c * b for a, b in zip(m[i], m[j])]
    return tuple(map(tuple, m))


def brute_points(P, lo=-12, hi=12):
    return sorted(p for p in product(range(lo, hi + 1), repeat=P.dim) if P.contains(p))


def test_square_h_and_v():
    P = hull([(0, 0), (2, 0), (0, 2), (2, 2), (1, 1)])
    assert P.vertices == ((0, 0), (0, 2), (2, 0), (2, 2))
    assert len(P.facets) == 4 and not P.equations
    assert from_halfspaces(P.halfspaces, 2) == P
    assert P == box((0, 0), (2, 2))
    assert len(P.edges()) == 4


def test_extreme_rays_of_orthant():
    rays = extreme_rays([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3)
    assert sorted(rays) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]


def test_lower_dimensional_hull():
    seg = hull([(0, 0, 0), (2, 2, 2), (1, 1, 1)])
    assert seg.intrinsic_dim == 1
    assert seg.vertices == ((0, 0, 0), (2, 2, 2))
    assert count_lattice_points(seg) == 3
    assert interior_lattice_points(seg) == [(1, 1, 1)]
    assert relative_volume(seg) == 2
    assert volume(seg) == 0


def test_point_and_empty():
    pt = hull([(1, 2)])
    assert pt.intrinsic_dim == 0 and volume(pt) == 0
    assert lattice_points(pt) == [(1, 2)]
    e = intersect(pt, [((1, 0), F(0))])
    assert e.is_empty and count_lattice_points(e) == 0


def test_unbounded_and_empty_halfspaces():
    with pytest.raises(UnboundedPolyhedron):
        from_halfspaces([((-1, 0), 0), ((0, -1), 0)], 2)
    with pytest.raises(EmptyPolytope):
        from_halfspaces([((1,), -1), ((-1,), 0)], 1)


def test_polar_of_cross_polytope_is_cube():
    cross = hull([(1, 0), (-1, 0), (0, 1), (0, -1)])
    assert polar(cross) == box((-1, -1), (1, 1))
    with pytest.raises(NotInterior):
        polar(hull([(0, 0), (1, 0), (0, 1)]))


def test_volume_and_triangulation():
    simplex = hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert volume(simplex) == F(1, 6)
    cube = box((0, 0, 0), (1, 1, 1))
    assert volume(cube) == 1
    assert all(len(s) == 4 for s in triangulation(cube))
    # area of the projection of a tilted square onto the first two coordinates
    tilted = hull([(0, 0, 0), (1, 0, 1), (0, 1, 0), (1, 1, 1)])
    assert projected_volume(tilted, [0, 1]) == 1
    # shoelace area of the quadrilateral from the planar mutation example
    assert volume(hull([(1, 1), (0, 1), (-1, -1), (0, -1)])) == 2


def test_slice_and_minkowski():
    sq = box((0, 0), (2, 2))
    assert slice_polytope(sq, (0, 1), 1) == hull([(0, 1), (2, 1)])
    seg = hull([(0, 0), (1, 0)])
    assert minkowski_sum(sq, seg) == box((0, 0), (3, 2))


@settings(max_examples=60, deadline=None)
@given(point_sets(2, 1, 8))
def test_h_v_round_trip_2d(pts):
    P = hull(pts)
    Q = from_halfspaces(P.halfspaces, 2)
    assert P == Q
    assert all(P.contains(p) for p in pts)


@settings(max_examples=40, deadline=None)
@given(point_sets(3, 1, 8))
def test_lattice_points_match_brute_force(pts):
    P = hull(pts)
    assert lattice_points(P) == brute_points(P, -4, 4)
    assert count_lattice_points(P) == len(lattice_points(P))
    inner = [p for p in brute_points(P, -4, 4) if P.contains(p, strict=True)]
    assert interior_lattice_points(P) == inner


@settings(max_examples=40, deadline=None)
@given(point_sets(2, 3, 8))
def test_polar_is_an_involution(pts):
    P = hull([tuple(x for x in p) for p in pts] + [(5, 0), (-5, 1), (0, 5), (1, -5)])
    assume(P.contains((0, 0), strict=True))
    assert polar(polar(P)) == P


@settings(max_examples=40, deadline=None)
@given(point_sets(3, 2, 6), unimodular(3), st.tuples(coords, coords, coords))
def test_unimodular_invariants_and_certificate(pts, m, t):
    P = hull(pts)
    Q = apply_affine(P, m, t)
    assert count_lattice_points(Q) == count_lattice_points(P)
    assert ehrhart_counts(Q, 2) == ehrhart_counts(P, 2)
    assert relative_volume(Q) == relative_volume(P)
    cert = affine_unimodular_equivalent(P, Q)
    assert cert is not None
    mm, tt = cert
    assert is_unimodular(mm)
    assert apply_affine(P, mm, tt) == Q


def test_inequivalent_polytopes():
    a = hull([(0, 0), (2, 0), (0, 1)])
    b = hull([(0, 0), (1, 0), (0, 2), (1, 1)])
    assert affine_unimodular_equivalent(a, b) is None
    with pytest.raises(NonLatticePolytope):
        affine_unimodular_equivalent(hull([(F(1, 2),)]), hull([(0,)]))


def test_search_budget_is_reported():
    cube = box((0, 0, 0, 0), (1, 1, 1, 1))
    with pytest.raises(SearchInconclusive) as info:
        affine_unimodular_equivalent(cube, translate(cube, (1, 0, 0, 0)), frame_budget=0)
    assert info.value.budget == 0


def test_dual_at_and_dilate():
    tri = hull([(-1, -1), (2, -1), (-1, 2)])
    assert interior_lattice_points(tri) == [(0, 0)]
    d = dual_at(translate(tri, (3, 1)), (3, 1))
    assert d == polar(tri)
    assert d.is_lattice
    assert dilate(tri, 2) == hull([(-2, -2), (4, -2), (-2, 4)])
    assert ehrhart_counts(tri, 3) == [10, 28, 55]


def test_json_round_trip():
    P = hull([(F(1, 2), 0), (0, 1), (-1, F(-1, 3))])
    assert loads(dumps(P)) == P
    seg = hull([(0, 0, 0), (1, 2, 3)])
    assert loads(dumps(seg)) == seg

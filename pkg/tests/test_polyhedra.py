from fractions import Fraction as F
from itertools import product

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from fduality import _kernels
from fduality.errors import EmptyLattice, OriginNotInterior, Unbounded
from fduality.exact_linalg import transpose
from fduality.polyhedra import (
    HRep,
    LatticePolytope,
    RationalPolytope,
    _lattice_points,
    contains_origin_interior,
    divisor_polytope,
    facet_interior_lattice_counts,
    facets_from_vertices,
    integer_part,
    minkowski_sum,
    polar,
    primitive_vertex_matrix,
    vertices_from_hrep,
)
from fduality.varieties import projective_space

P2 = projective_space(2)
LAMBDA_112 = [[3, -1, -1], [-1, 3, -1]]
WPS_125 = [[1, 2, -1], [0, 5, -2]]


def pts(*vs):
    return tuple(tuple(F(x) for x in v) for v in sorted(vs))


# -------------------------------------------------------------- H to V

def test_quartic_polytope_vertices():
    P = divisor_polytope(P2, (1, 1, 2))
    assert P.vertices == pts((3, -1), (-1, 3), (-1, -1))


def test_anticanonical_triangle_vertices():
    P = divisor_polytope(P2, (1, 1, 1))
    assert P.vertices == pts((2, -1), (-1, 2), (-1, -1))


def test_dual_quartic_polytope_is_rational():
    P = divisor_polytope(LAMBDA_112, (2, 2, 1))
    assert P.vertices == pts((F(5, 4), F(-1, 4)), (F(-1, 4), F(5, 4)), (-1, -1))
    assert not P.is_lattice


def test_unbounded_region():
    with pytest.raises(Unbounded):
        vertices_from_hrep(HRep.make([[1, 0], [0, 1]], [0, 0]))


# -------------------------------------------------------------- lattice points

@pytest.mark.parametrize("V, a, count", [
    (P2, (1, 1, 1), 10),
    (P2, (1, 1, 2), 15),
    (LAMBDA_112, (2, 2, 1), 4),
])
def test_lattice_point_counts(V, a, count):
    assert len(divisor_polytope(V, a).lattice_points()) == count


def test_integer_part_of_lattice_polytope_is_itself():
    P = divisor_polytope(P2, (1, 1, 2))
    assert integer_part(P).vertices == P.vertices


def test_integer_part_of_wps_divisor():
    P = divisor_polytope(WPS_125, (2, 1, 1))
    assert P.vertices == pts((-2, F(3, 2)), (-2, F(3, 5)), (7, -3))
    assert integer_part(P).vertices == pts((-1, 1), (-2, 1), (2, -1), (7, -3))


def test_integer_part_of_dual_quartic_polytope():
    Q = integer_part(divisor_polytope(LAMBDA_112, (2, 2, 1)))
    assert Q.vertices == pts((1, 0), (0, 1), (-1, -1))


def test_integer_part_empty():
    thin = RationalPolytope([(F(1, 3), F(1, 3)), (F(2, 3), F(1, 3)), (F(1, 3), F(2, 3))])
    with pytest.raises(EmptyLattice):
        integer_part(thin)


# -------------------------------------------------------------- origin, polarity

def test_origin_interior_needs_doubling():
    P = divisor_polytope(WPS_125, (2, 1, 1))
    assert not contains_origin_interior(integer_part(P))
    assert contains_origin_interior(integer_part(P.scaled(2)))


def test_origin_interior_standard_simplex():
    for n in (2, 3, 4):
        assert contains_origin_interior(LatticePolytope(transpose(projective_space(n))))


def test_polar_of_anticanonical_triangle():
    P = divisor_polytope(P2, (1, 1, 1))
    assert polar(P).vertices == pts((1, 0), (0, 1), (-1, -1))


def test_polar_of_cross_polytope():
    P = LatticePolytope([(1, 0), (-1, 0), (0, 1), (0, -1)])
    assert polar(P).vertices == pts((1, 1), (1, -1), (-1, 1), (-1, -1))


def test_polar_requires_interior_origin():
    with pytest.raises(OriginNotInterior):
        polar(LatticePolytope([(0, 0), (1, 0), (0, 1)]))


# -------------------------------------------------------------- fan matrices of polytopes

def test_primitive_vertex_matrix_values():
    assert primitive_vertex_matrix(divisor_polytope(P2, (1, 1, 2))) == [[-1, -1, 3], [-1, 3, -1]]
    halved = primitive_vertex_matrix(LatticePolytope([(2, 0), (0, 2), (-2, -2)]))
    assert sorted(zip(*halved)) == sorted(zip(*P2))
    dual = integer_part(divisor_polytope(LAMBDA_112, (2, 2, 1)))
    assert sorted(zip(*primitive_vertex_matrix(dual))) == sorted(zip(*P2))


def test_primitive_vertex_matrix_merges_duplicates():
    # two vertices on one ray need the origin outside the polytope
    P = LatticePolytope([(1, 1), (2, 2), (2, 0)])
    assert len(P.vertices) == 3
    assert primitive_vertex_matrix(P, require_interior_origin=False) == [[1, 1], [0, 1]]


# -------------------------------------------------------------- facet interior counts

def test_facet_counts_anticanonical_triangle():
    # each edge of conv((2,-1),(-1,2),(-1,-1)) has length 3, hence two interior points
    assert facet_interior_lattice_counts(divisor_polytope(P2, (1, 1, 1))) == [2, 2, 2]


def test_facet_counts_unit_simplex():
    assert facet_interior_lattice_counts(LatticePolytope([(0, 0), (1, 0), (0, 1)])) == [0, 0, 0]


def test_facet_counts_dual_anticanonical():
    # anticanonical polytope of the quotient of P(1,1,2)
    assert facet_interior_lattice_counts(divisor_polytope(LAMBDA_112, (1, 1, 1))) == [0, 0, 0]


def brute_facet_counts(P):
    out = []
    for a, r in P.facets:
        on = [x for x in P.lattice_points() if sum(s * t for s, t in zip(a, x)) == r]
        interior = [x for x in on if x not in {tuple(int(c) for c in v) for v in P.vertices}]
        out.append(len(interior))
    return out


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=3, max_size=6))
def test_facet_counts_match_brute_force_in_the_plane(vs):
    P = LatticePolytope(vs)
    assume(P.is_full_dimensional)
    assert facet_interior_lattice_counts(P) == brute_facet_counts(P)


# -------------------------------------------------------------- properties

lattice_polygon = st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=3, max_size=7)
lattice_3d = st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2)),
                      min_size=4, max_size=8)


@settings(max_examples=30, deadline=None)
@given(st.one_of(lattice_polygon, lattice_3d))
def test_polar_involution(vs):
    P = LatticePolytope(vs)
    assume(contains_origin_interior(P))
    assert polar(polar(P)).vertices == P.vertices


@settings(max_examples=30, deadline=None)
@given(st.one_of(lattice_polygon, lattice_3d))
def test_hrep_roundtrip(vs):
    P = LatticePolytope(vs)
    assume(P.is_full_dimensional)
    h = facets_from_vertices(P.vertices)
    Q = vertices_from_hrep(h)
    assert Q.vertices == P.vertices
    assert set(Q.lattice_points()) == set(P.lattice_points())


@settings(max_examples=30, deadline=None)
@given(lattice_polygon, lattice_polygon, lattice_polygon)
def test_minkowski_sum_commutative_associative(u, v, w):
    A, B, C = LatticePolytope(u), LatticePolytope(v), LatticePolytope(w)
    assert minkowski_sum(A, B).vertices == minkowski_sum(B, A).vertices
    assert minkowski_sum(minkowski_sum(A, B), C).vertices == minkowski_sum(A, minkowski_sum(B, C)).vertices


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(1, 4), min_size=3, max_size=3))
def test_lattice_count_monotone_and_integer_part_inside(a):
    P = divisor_polytope(P2, a)
    counts = [len(P.scaled(k).lattice_points()) for k in (1, 2, 3)]
    assert counts == sorted(counts)
    I = integer_part(P)
    assert len(I.lattice_points()) >= len(I.vertices)
    assert all(P.contains(v) for v in I.vertices)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=4), min_size=3, max_size=3))
def test_lattice_points_against_brute_force(shift):
    a = [x + 3 for x in shift]
    P = divisor_polytope(P2, a)
    lo = [int(min(v[i] for v in P.vertices)) - 1 for i in range(2)]
    hi = [int(max(v[i] for v in P.vertices)) + 1 for i in range(2)]
    brute = [x for x in product(range(lo[0], hi[0] + 1), range(lo[1], hi[1] + 1))
             if x[0] >= -a[0] and x[1] >= -a[1] and -x[0] - x[1] >= -a[2]]
    assert P.lattice_points() == sorted(brute)


# -------------------------------------------------------------- scan backends

@pytest.mark.skipif(_kernels.backend_name() != "numba", reason="numba unavailable")
@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(1, 5), min_size=4, max_size=4))
def test_scan_backends_agree(a):
    V = projective_space(3)
    P = divisor_polytope(V, a)
    assert _lattice_points(P, backend="numba") == _lattice_points(P, backend="numpy")


def test_scan_box_orders_lexicographically():
    got = _kernels.scan_box([[1, 1]], [1], [0, 0], [1, 1], backend="numpy")
    assert got.tolist() == [[0, 1], [1, 0], [1, 1]]
    assert isinstance(got, np.ndarray)

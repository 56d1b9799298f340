import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fduality.errors import AllZeroFraming, InputError
from fduality.exact_linalg import column_permutation, columns, matmul, transpose
from fduality.ftv_core import (
    FramedToricVariety,
    WeaklyFramedToricVariety,
    aligned_c,
    f_dual,
    f_polytope,
    f_process,
    is_calibrated,
    is_k_dual,
    minimal_shift,
    record_is_k_dual,
    weak_f_dual,
)
from fduality.polyhedra import LatticePolytope, integer_part, polar, primitive_vertex_matrix
from fduality.varieties import hirzebruch, projective_space

P2 = projective_space(2)
WPS_125 = [[1, 2, -1], [0, 5, -2]]
F0 = hirzebruch(0)


def same_columns(A, B):
    return column_permutation(A, B) is not None


# -------------------------------------------------------------- construction

def test_framing_must_be_strictly_positive():
    with pytest.raises(InputError):
        FramedToricVariety(P2, (1, 0, 1))


def test_fan_matrix_is_checked():
    with pytest.raises(InputError):
        FramedToricVariety([[1, 0], [0, 1]], (1, 1))


def test_weak_framing_needs_a_positive_entry():
    with pytest.raises(AllZeroFraming):
        weak_f_dual(WeaklyFramedToricVariety(P2, (0, 0, 0)))


# -------------------------------------------------------------- f-polytope

def test_k0_quartic():
    k0, P = f_polytope(FramedToricVariety(P2, (1, 1, 2)))
    assert k0 == 1
    assert [tuple(v) for v in P.lattice_vertices] == [(-1, -1), (-1, 3), (3, -1)]


def test_k0_needs_doubling():
    k0, _ = f_polytope(FramedToricVariety(WPS_125, (2, 1, 1)))
    assert k0 == 2


def test_k0_anticanonical_triangle():
    k0, P = f_polytope(FramedToricVariety(P2, (1, 1, 1)))
    assert k0 == 1 and len(P.lattice_points()) == 10


# -------------------------------------------------------------- f-dual and f-process

def test_dual_of_quartic():
    rec = f_dual(FramedToricVariety(P2, (1, 1, 2)))
    ref = [[3, -1, -1], [-1, 3, -1]]
    perm = column_permutation(ref, rec.Lambda_a)
    assert perm is not None
    assert [rec.b[j] for j in perm] == [2, 2, 1]
    assert rec.M_a == matmul(transpose(P2), rec.Lambda_a)


@pytest.mark.parametrize("g", [2, 3, 4, 5])
def test_dual_of_hyperelliptic_framing(g):
    rec = f_dual(FramedToricVariety(F0, (1, 1, 1, g)))
    ref = [[1, 1, -1, -1], [g, -1, g, -1]]
    perm = column_permutation(ref, rec.Lambda_a)
    assert perm is not None
    assert [rec.b[j] for j in perm] == [g, 1, g, 1]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_anticanonical_projective_space_is_batyrev(n):
    V = projective_space(n)
    rec = f_process(FramedToricVariety(V, [1] * (n + 1)))
    nabla = LatticePolytope(columns(V))
    assert same_columns(rec.Lambda_a, primitive_vertex_matrix(polar(nabla)))
    assert rec.b == [1] * (n + 1)
    assert same_columns(rec.Lambda_b, V)
    assert rec.calibrated and record_is_k_dual(rec)


def test_process_of_quartic():
    rec = f_process(FramedToricVariety(P2, (1, 1, 2)))
    assert same_columns(rec.Lambda_b, P2)
    assert aligned_c(rec) == [1, 1, 2]
    assert rec.M_ab == matmul(transpose(rec.Lambda_a), rec.Lambda_b)


@pytest.mark.parametrize("g", [2, 3, 4])
def test_process_of_hyperelliptic_framing(g):
    rec = f_process(FramedToricVariety(F0, (1, 1, 1, g)))
    assert same_columns(rec.Lambda_b, F0)
    assert aligned_c(rec) == [1, 1, 1, g]
    assert rec.calibrated


def test_calibration_verdicts():
    assert is_calibrated(FramedToricVariety(P2, (1, 1, 2)))[0]
    ok, ev = is_calibrated(FramedToricVariety(WPS_125, (2, 1, 1)))
    assert not ok
    assert "k0>1" in ev["failures"]
    for g in (2, 3, 4):
        assert is_calibrated(FramedToricVariety(F0, (1, 1, 1, g)))[0]


def test_k_duality_verdicts():
    assert is_k_dual(FramedToricVariety(P2, (1, 1, 2)))
    assert not is_k_dual(FramedToricVariety(WPS_125, (2, 1, 1)))
    assert is_k_dual(FramedToricVariety(F0, (1, 1, 1, 1)))


def test_failure_evidence_names_the_index():
    # the third ray meets a non-primitive vertex of the f-polytope
    ok, ev = is_calibrated(FramedToricVariety(P2, (3, 4, 6)))
    assert not ok
    assert ev["failures"] == ["min_pairing!=-a"]
    assert ev["pairing_failures"] == [2]
    assert ev["min_pairing"] == [-3, -4, -3]


# -------------------------------------------------------------- weak framings

@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_weak_dual_single_ray(n):
    rec = weak_f_dual(WeaklyFramedToricVariety(projective_space(n), [1] + [0] * n))
    ref = [[-1] * n] + [[int(i == j) for j in range(n - 1)] + [0] for i in range(n - 1)]
    assert same_columns(rec.Lambda_a, ref)
    assert rec.b == [1] * n


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_weak_dual_several_rays(n):
    for d in range(2, n + 1):
        rec = weak_f_dual(WeaklyFramedToricVariety(projective_space(n), [1] * d + [0] * (n + 1 - d)))
        assert rec.b == [1] * (n + 1)
        assert rec.M_ab == matmul(transpose(rec.Lambda_a), projective_space(n))


def test_weak_dual_agrees_with_strict_dual_when_positive():
    strict = f_dual(FramedToricVariety(P2, (1, 1, 2)))
    weak = weak_f_dual(WeaklyFramedToricVariety(P2, (1, 1, 2)))
    assert weak.Lambda_a == strict.Lambda_a
    assert weak.b == strict.b


# -------------------------------------------------------------- properties

framings = st.one_of(
    st.tuples(st.just("P2"), st.lists(st.integers(1, 5), min_size=3, max_size=3)),
    st.tuples(st.just("F0"), st.lists(st.integers(1, 5), min_size=4, max_size=4)),
    st.tuples(st.just("P3"), st.lists(st.integers(1, 4), min_size=4, max_size=4)),
)
FANS = {"P2": P2, "F0": F0, "P3": projective_space(3)}


@settings(max_examples=60, deadline=None)
@given(framings)
def test_process_invariants(case):
    name, a = case
    V = FANS[name]
    rec = f_process(FramedToricVariety(V, a))
    # b is the least admissible shift: lowering any entry breaks M_a^T + B >= 0
    M = rec.first.M_a
    b = rec.b
    for j in range(len(b)):
        assert all(M[i][j] + b[j] >= 0 for i in range(len(M)))
        if b[j] > 1:
            assert any(M[i][j] + b[j] - 1 < 0 for i in range(len(M)))
    assert minimal_shift(M, 1) == b
    # conv(V) always sits inside the second f-polytope
    Db = integer_part(rec.second.delta)
    assert all(Db.contains(v) for v in columns(V))
    if rec.calibrated:
        assert rec.k0 == 1 and rec.k1 == 1
        assert aligned_c(rec) == list(a)

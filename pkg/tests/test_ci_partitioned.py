from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fduality.ci_partitioned import (
    PartitionedFraming,
    ci_mirror_monomials,
    ci_primal_monomials,
    partition_polytopes,
    partitioned_calibrated,
    partitioned_dual,
    partitioned_process,
)
from fduality.errors import InputError, PartitionInvalid
from fduality.exact_linalg import column_permutation
from fduality.ftv_core import FramedToricVariety, f_dual, is_calibrated
from fduality.polyhedra import divisor_polytope
from fduality.varieties import hirzebruch, projective_space

from conftest import to_reference_order

P2 = projective_space(2)
F1 = hirzebruch(1)
LINE_CONIC = ([1, 0, 0], [0, 1, 2])
LAMBDA_REF = [[-1, -1, 3, 0, 0], [1, 0, -1, 1, -1]]


def pts(*vs):
    return tuple(tuple(F(x) for x in v) for v in sorted(vs))


@pytest.fixture(scope="module")
def line_conic():
    return partitioned_process(P2, PartitionedFraming.from_vectors(LINE_CONIC))


# -------------------------------------------------------------- partitions

def test_blocks_are_read_from_supports():
    pf = PartitionedFraming.from_vectors(LINE_CONIC)
    assert pf.blocks == ((0,), (1, 2))
    assert pf.a == [1, 1, 2]


@pytest.mark.parametrize("vectors", [
    [[1, 1, 0], [0, 1, 2]],   # overlapping supports
    [[0, 0, 0], [1, 1, 1]],   # empty block
    [[1, 0, 0]],              # total framing not strictly positive
    [[1, 0, 0], [0, 1, -1]],  # negative entry
    [[1, 0, 0], [0, 1]],      # ragged
])
def test_malformed_partitions(vectors):
    with pytest.raises(InputError):
        PartitionedFraming.from_vectors(vectors)


def test_part_polytopes_of_line_and_conic():
    P1, P2_ = partition_polytopes(P2, PartitionedFraming.from_vectors(LINE_CONIC))
    assert P1.vertices == pts((0, 0), (-1, 1), (-1, 0))
    assert P2_.vertices == pts((3, -1), (0, 2), (0, -1))


def test_trivial_partition_polytope():
    (P,) = partition_polytopes(P2, PartitionedFraming.from_vectors([[1, 1, 2]]))
    assert P.vertices == divisor_polytope(P2, (1, 1, 2)).vertices


def test_sum_identity_failure():
    # the polytope of the first part is the origin alone, so (0,-1) is never reached
    pf = PartitionedFraming.from_vectors([[0, 0, 1, 0], [1, 1, 0, 1]])
    with pytest.raises(PartitionInvalid) as exc:
        partition_polytopes(F1, pf)
    assert exc.value.evidence["identity"] == "sum"


# -------------------------------------------------------------- dual data

def test_line_conic_dual_fan_and_shifts(line_conic):
    rec = line_conic
    perm = column_permutation(LAMBDA_REF, rec.Lambda_a)
    assert perm is not None
    assert [rec.b_parts[0][j] for j in perm] == [1, 1, 0, 0, 0]
    assert [rec.b_parts[1][j] for j in perm] == [0, 0, 2, 1, 1]
    assert rec.k0 == 1


def test_line_conic_is_calibrated(line_conic):
    assert line_conic.calibrated
    assert line_conic.evidence["aligned_c"] == [[1, 0, 0], [0, 1, 2]]
    assert same_columns(line_conic.Lambda_b, P2)


def same_columns(A, B):
    return column_permutation(A, B) is not None


def test_line_conic_dual_equations(line_conic):
    rec = line_conic
    f1 = to_reference_order(ci_mirror_monomials(rec, 0), LAMBDA_REF, rec.Lambda_a)
    f2 = to_reference_order(ci_mirror_monomials(rec, 1), LAMBDA_REF, rec.Lambda_a)
    assert f1.as_set() == {(0, 0, 3, 0, 0), (1, 1, 0, 0, 0)}
    assert f2.as_set() == {(1, 0, 1, 2, 0), (0, 1, 0, 0, 2), (0, 0, 2, 1, 1)}


def test_line_conic_primal_equations():
    pf = PartitionedFraming.from_vectors(LINE_CONIC)
    line = ci_primal_monomials(P2, pf, 0)
    assert line.as_set() == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}
    assert len(ci_primal_monomials(P2, pf, 1)) == 10


def test_nef_partition_of_anticanonical_plane():
    ok, ev = partitioned_calibrated(P2, PartitionedFraming.from_vectors([[1, 0, 0], [0, 1, 0], [0, 0, 1]]))
    assert ok
    assert ev["aligned_c"] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


@pytest.mark.parametrize("V, a", [
    (P2, (1, 1, 2)),
    (P2, (1, 1, 1)),
    (hirzebruch(0), (1, 1, 1, 2)),
    ([[1, 2, -1], [0, 5, -2]], (2, 1, 1)),
])
def test_trivial_partition_reduces_to_single_framing(V, a):
    pf = PartitionedFraming.from_vectors([list(a)])
    rec = partitioned_dual(V, pf)
    single = f_dual(FramedToricVariety(V, a))
    assert same_columns(rec.Lambda_a, single.Lambda_a)
    perm = column_permutation(single.Lambda_a, rec.Lambda_a)
    assert [rec.b_parts[0][j] for j in perm] == list(single.b)
    assert partitioned_calibrated(V, pf)[0] == is_calibrated(FramedToricVariety(V, a))[0]


# -------------------------------------------------------------- properties

@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=3, max_size=3), st.lists(st.integers(0, 1), min_size=3, max_size=3))
def test_two_part_partitions_of_the_plane(a, mask):
    if all(mask) or not any(mask):
        mask = [1, 0, 0]
    parts = [[x if m else 0 for x, m in zip(a, mask)], [0 if m else x for x, m in zip(a, mask)]]
    rec = partitioned_process(P2, PartitionedFraming.from_vectors(parts))
    # each dual ray lands in exactly one induced block
    assigned = sorted(j for block in rec.J for j in block)
    assert assigned == list(range(len(rec.Lambda_a[0])))
    for k, block in enumerate(rec.J):
        assert all(rec.b_parts[k][j] > 0 for j in block) or not any(rec.b_parts[k])
    # the hull contains every part polytope, scaled by k0
    for P in rec.part_polytopes:
        assert all(rec.hull.contains(tuple(rec.k0 * x for x in v)) for v in P.vertices)
    if rec.calibrated:
        assert rec.evidence["aligned_c"] == parts

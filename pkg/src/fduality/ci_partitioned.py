"""Partitioned f-process for complete intersections.

A framing ``a`` is split as ``a = a_1 + ... + a_l`` with each ``a_k``
supported on a block ``I_k`` of a partition of the rays.  The dual side is
built over the convex hull of the part polytopes; the process is run twice
and compared with the input.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

from .errors import CapExceeded, EmptyLattice, InputError, PartitionInvalid
from .exact_linalg import as_int_matrix, column_permutation, matmul, transpose
from .ftv_core import DEFAULT_K_CAP, minimal_shift
from .mirror_families import ExponentMatrix, exponent_matrix, family_monomials
from .polyhedra import (
    HRep,
    LatticePolytope,
    RationalPolytope,
    contains_origin_interior,
    convex_hull,
    divisor_polytope,
    integer_part,
    minkowski_sum,
    primitive_vertex_matrix,
    vertices_from_hrep,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PartitionedFraming:
    """Blocks ``I_k`` (0-based ray indices) with sub-framings ``a_k`` of full length ``m``."""

    blocks: tuple[tuple[int, ...], ...]
    parts: tuple[tuple[int, ...], ...]

    @classmethod
    def from_vectors(cls, vectors: Sequence[Sequence[int]], blocks=None) -> "PartitionedFraming":
        parts = tuple(tuple(int(x) for x in v) for v in vectors)
        if blocks is None:
            blocks = tuple(tuple(i for i, x in enumerate(v) if x > 0) for v in parts)
        else:
            blocks = tuple(tuple(sorted(int(i) for i in b)) for b in blocks)
        pf = cls(blocks, parts)
        pf.validate()
        return pf

    @property
    def a(self) -> list[int]:
        return [sum(col) for col in zip(*self.parts)]

    def validate(self) -> None:
        if not self.parts:
            raise InputError("empty partition")
        m = len(self.parts[0])
        if any(len(p) != m for p in self.parts):
            raise InputError("sub-framings have different lengths")
        seen = sorted(i for b in self.blocks for i in b)
        if seen != list(range(m)) or any(not b for b in self.blocks):
            raise InputError("blocks must partition the rays into non-empty sets")
        for b, p in zip(self.blocks, self.parts):
            if any(x < 0 for x in p) or any(p[i] for i in range(m) if i not in b):
                raise InputError("each sub-framing is non-negative and supported on its block")
        if any(x < 1 for x in self.a):
            raise InputError("the total framing must be strictly positive")


@dataclass
class PartitionedDualRecord:
    part_polytopes: list[RationalPolytope]
    k0: int
    hull: LatticePolytope
    Lambda_a: list[list[int]]
    b_parts: list[list[int]]
    J: list[list[int]]
    dual_part_polytopes: list[RationalPolytope]
    h1: int | None = None
    Lambda_b: list[list[int]] | None = None
    c_parts: list[list[int]] | None = None
    calibrated: bool | None = None
    evidence: dict = field(default_factory=dict)

    @property
    def b(self) -> list[int]:
        return [sum(col) for col in zip(*self.b_parts)]


def _intersection_is_origin(polys: Sequence[RationalPolytope]) -> bool:
    rows, rhs = [], []
    for p in polys:
        rows += [list(r) for r in p.hrep.A]
        rhs += list(p.hrep.rhs)
    try:
        inter = vertices_from_hrep(HRep.make(rows, rhs))
    except Exception:
        return False
    return [tuple(v) for v in inter.vertices] == [tuple([0] * len(rows[0]))]


def _sum_identity(polys: Sequence[RationalPolytope], total: RationalPolytope) -> bool:
    acc = polys[0]
    for p in polys[1:]:
        acc = minkowski_sum(acc, p)
    return acc == total


def partition_polytopes(V, pf: PartitionedFraming) -> list[RationalPolytope]:
    """Part polytopes ``{m : V^T m >= -a_k}`` after checking the intersection and sum identities."""
    V = as_int_matrix(V)
    polys = [divisor_polytope(V, p) for p in pf.parts]
    total = divisor_polytope(V, pf.a)
    if len(polys) > 1:
        if not _intersection_is_origin(polys):
            raise PartitionInvalid("part polytopes meet outside the origin", {"identity": "intersection"})
        if not _sum_identity(polys, total):
            raise PartitionInvalid("Minkowski sum of the parts differs from the total polytope",
                                   {"identity": "sum"})
    return polys


def _hull_search(polys, k_cap: int) -> tuple[int, LatticePolytope]:
    hull = convex_hull(polys)
    for k in range(1, k_cap + 1):
        try:
            P = integer_part(hull.scaled(k))
        except EmptyLattice:
            continue
        if contains_origin_interior(P):
            return k, P
    raise CapExceeded(f"no multiple k <= {k_cap} puts the origin inside the hull")


def _induced_partition(b_parts: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    mbar = len(b_parts[0])
    J: list[list[int]] = [[] for _ in b_parts]
    unassigned = []
    for j in range(mbar):
        owners = [k for k, b in enumerate(b_parts) if b[j] > 0]
        if len(owners) > 1:
            raise PartitionInvalid("dual ray has positive entries in several parts",
                                   {"ray": j, "parts": owners})
        if owners:
            J[owners[0]].append(j)
        else:
            J[0].append(j)
            unassigned.append(j)
    if unassigned:
        log.warning("dual rays %s have no positive entry; assigned to the first part", unassigned)
    return J, unassigned


def partitioned_dual(V, pf: PartitionedFraming, k_cap: int = DEFAULT_K_CAP) -> PartitionedDualRecord:
    """First partitioned dual: hull polytope, its fan matrix, ``b_k`` and the induced partition."""
    V = as_int_matrix(V)
    polys = partition_polytopes(V, pf)
    k0, hull = _hull_search(polys, k_cap)
    Lam = primitive_vertex_matrix(hull)
    b_parts = []
    for block in pf.blocks:
        VI = [[row[i] for i in block] for row in V]
        b_parts.append(minimal_shift(matmul(transpose(VI), Lam), 0))
    for k, b in enumerate(b_parts):
        if not any(b):
            raise PartitionInvalid("a part has empty dual support", {"part": k, "b": b})
    J, unassigned = _induced_partition(b_parts)
    dual_polys = [divisor_polytope(Lam, b) for b in b_parts]
    bbar = [sum(c) for c in zip(*b_parts)]
    evidence = {"unassigned_rays": unassigned}
    if len(dual_polys) > 1:
        evidence["dual_intersection_origin"] = _intersection_is_origin(dual_polys)
        evidence["dual_sum_identity"] = _sum_identity(dual_polys, divisor_polytope(Lam, bbar))
        if not (evidence["dual_intersection_origin"] and evidence["dual_sum_identity"]):
            raise PartitionInvalid("dual part polytopes violate the intersection/sum identities", evidence)
    return PartitionedDualRecord(polys, k0, hull, Lam, b_parts, J, dual_polys, evidence=evidence)


def partitioned_process(V, pf: PartitionedFraming, k_cap: int = DEFAULT_K_CAP) -> PartitionedDualRecord:
    """Run the dual construction twice and evaluate the calibration conditions."""
    V = as_int_matrix(V)
    rec = partitioned_dual(V, pf, k_cap)
    h1, hull_b = _hull_search(rec.dual_part_polytopes, k_cap)
    Lb = primitive_vertex_matrix(hull_b)
    c_parts = []
    for Jk in rec.J:
        LJ = [[row[j] for j in Jk] for row in rec.Lambda_a]
        c_parts.append(minimal_shift(matmul(transpose(LJ), Lb), 0))
    perm = column_permutation(V, Lb)
    aligned = [[c[j] for j in perm] for c in c_parts] if perm is not None else None
    calibrated = aligned is not None and all(list(c) == list(a) for c, a in zip(aligned, pf.parts))
    rec.h1, rec.Lambda_b, rec.c_parts, rec.calibrated = h1, Lb, c_parts, calibrated
    rec.evidence.update({"permutation": perm, "aligned_c": aligned, "h1": h1,
                         "h1_is_one": h1 == 1})
    if calibrated and h1 != 1:
        log.warning("calibrated partitioned process with h1 = %d", h1)
    return rec


def partitioned_calibrated(V, pf: PartitionedFraming, k_cap: int = DEFAULT_K_CAP) -> tuple[bool, dict]:
    rec = partitioned_process(V, pf, k_cap)
    return bool(rec.calibrated), rec.evidence


def ci_mirror_monomials(rec: PartitionedDualRecord, k: int) -> ExponentMatrix:
    """Cox exponents of the ``k``-th (zero-based) dual equation: ``Lambda_a^T n + b_k`` over ``[Delta_{b_k}]``."""
    pts = integer_part(rec.dual_part_polytopes[k]).lattice_points()
    return exponent_matrix(rec.Lambda_a, rec.b_parts[k], pts, None)


def ci_primal_monomials(V, pf: PartitionedFraming, k: int) -> ExponentMatrix:
    pts = integer_part(divisor_polytope(V, pf.parts[k])).lattice_points()
    return family_monomials(V, pf.parts[k], pts)

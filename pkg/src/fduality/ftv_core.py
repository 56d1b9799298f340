"""Framed toric varieties and the f-duality engine."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import AllZeroFraming, CapExceeded, EmptyLattice, InputError
from .exact_linalg import (
    as_int_matrix,
    column_permutation,
    columns,
    dot,
    gcd_list,
    is_F_matrix,
    matmul,
    transpose,
)
from .polyhedra import (
    LatticePolytope,
    contains_origin_interior,
    divisor_polytope,
    integer_part,
    primitive_vertex_matrix,
)

DEFAULT_K_CAP = 1000


@dataclass(frozen=True)
class FramedToricVariety:
    """A complete toric variety (fan matrix ``V``) with a divisor vector ``a``.

    ``weak=False`` requires every ``a_i >= 1``; ``weak=True`` allows zeros.
    """

    V: tuple[tuple[int, ...], ...]
    a: tuple[int, ...]
    weak: bool = False

    def __init__(self, V, a, weak: bool = False, check: bool = True):
        Vm = as_int_matrix(V)
        a = tuple(int(x) for x in a)
        object.__setattr__(self, "V", tuple(tuple(r) for r in Vm))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "weak", weak)
        if check:
            self.validate()

    def validate(self) -> None:
        if len(self.a) != self.m:
            raise InputError(f"framing has length {len(self.a)}, fan matrix has {self.m} columns")
        if not is_F_matrix(self.V):
            raise InputError("V is not a fan matrix of a complete toric variety")
        if any(gcd_list(c) != 1 for c in columns(self.V)):
            raise InputError("fan matrix columns must be primitive")
        if self.weak:
            if any(x < 0 for x in self.a):
                raise InputError("a weak framing is non-negative")
            if not any(self.a):
                raise AllZeroFraming("a weak framing is not identically zero")
        elif any(x < 1 for x in self.a):
            raise InputError("a framing must be strictly positive")

    @property
    def n(self) -> int:
        return len(self.V)

    @property
    def m(self) -> int:
        return len(self.V[0])

    @property
    def fan(self) -> list[list[int]]:
        return [list(r) for r in self.V]


def WeaklyFramedToricVariety(V, a) -> FramedToricVariety:
    return FramedToricVariety(V, a, weak=True)


@dataclass
class FtvDualRecord:
    k0: int
    delta: LatticePolytope
    Lambda_a: list[list[int]]
    M_a: list[list[int]]
    b: list[int]
    points: list[tuple[int, ...]]
    weak: bool = False
    M_ab: list[list[int]] | None = None  # only set for weak framings

    @property
    def m_dual(self) -> int:
        return len(self.Lambda_a[0])


@dataclass
class FProcessRecord:
    first: FtvDualRecord
    second: FtvDualRecord
    M_ab: list[list[int]]
    c: list[int]
    calibrated: bool
    evidence: dict = field(default_factory=dict)

    @property
    def k0(self) -> int:
        return self.first.k0

    @property
    def k1(self) -> int:
        return self.second.k0

    @property
    def Lambda_a(self):
        return self.first.Lambda_a

    @property
    def Lambda_b(self):
        return self.second.Lambda_a

    @property
    def b(self):
        return self.first.b


def f_polytope(ftv: FramedToricVariety, k_cap: int = DEFAULT_K_CAP) -> tuple[int, LatticePolytope]:
    """Least ``k`` with the origin interior to ``[k Delta_a]``, and that lattice polytope."""
    for k in range(1, k_cap + 1):
        try:
            P = integer_part(divisor_polytope(ftv.V, ftv.a, k))
        except EmptyLattice:
            continue
        if contains_origin_interior(P):
            return k, P
    raise CapExceeded(f"no multiple k <= {k_cap} puts the origin in the interior")


def minimal_shift(M: Sequence[Sequence[int]], floor: int) -> list[int]:
    """Least vector ``b >= floor`` with ``M^T + (b ... b) >= 0``, i.e. ``b_j >= -M[i][j]``."""
    return [max([floor] + [-M[i][j] for i in range(len(M))]) for j in range(len(M[0]))]


def f_dual(ftv: FramedToricVariety, k_cap: int = DEFAULT_K_CAP) -> FtvDualRecord:
    if ftv.weak:
        return weak_f_dual(ftv)
    k0, P = f_polytope(ftv, k_cap)
    Lam = primitive_vertex_matrix(P)
    M = matmul(transpose(ftv.fan), Lam)
    return FtvDualRecord(k0, P, Lam, M, minimal_shift(M, 1), P.lattice_points())


def weak_f_dual(wftv: FramedToricVariety) -> FtvDualRecord:
    """Dual of a weak framing: no rescaling, origin dropped from the rays, ``b >= 0``."""
    if not any(wftv.a):
        raise AllZeroFraming("all-zero framing")
    P = integer_part(divisor_polytope(wftv.V, wftv.a))
    Lam = primitive_vertex_matrix(P, require_interior_origin=False)
    M = matmul(transpose(wftv.fan), Lam)
    b = minimal_shift(M, 0)
    return FtvDualRecord(1, P, Lam, M, b, P.lattice_points(), weak=True,
                         M_ab=matmul(transpose(Lam), wftv.fan))


def f_process(ftv: FramedToricVariety, k_cap: int = DEFAULT_K_CAP) -> FProcessRecord:
    first = f_dual(ftv, k_cap)
    dual = FramedToricVariety(first.Lambda_a, first.b, check=False)
    second = f_dual(dual, k_cap)
    M_ab = second.M_a  # = Lambda_a^T . Lambda_b
    calibrated, evidence = _calibration(ftv, first, second)
    return FProcessRecord(first, second, M_ab, second.b, calibrated, evidence)


def _calibration(ftv, first: FtvDualRecord, second: FtvDualRecord) -> tuple[bool, dict]:
    V = ftv.fan
    perm = column_permutation(V, second.Lambda_a)
    lam_cols = columns(first.Lambda_a)
    pairing = [min(dot(v, lam) for lam in lam_cols) for v in columns(V)]
    bad = [i for i, (p, a) in enumerate(zip(pairing, ftv.a)) if p != -a]
    failures = []
    if first.k0 > 1:
        failures.append("k0>1")
    if second.k0 > 1:
        failures.append("k1>1")
    if perm is None:
        failures.append("Lambda_b!=V")
    if bad:
        failures.append("min_pairing!=-a")
    ok = perm is not None and not bad
    evidence = {
        "k0": first.k0,
        "k1": second.k0,
        "permutation": perm,
        "min_pairing": pairing,
        "pairing_failures": bad,
        "failures": failures,
    }
    return ok, evidence


def is_calibrated(ftv: FramedToricVariety, k_cap: int = DEFAULT_K_CAP) -> tuple[bool, dict]:
    rec = f_process(ftv, k_cap)
    return rec.calibrated, rec.evidence


def is_k_dual(ftv: FramedToricVariety, k_cap: int = DEFAULT_K_CAP) -> bool:
    """Transpose test between the two exponent matrices, columns compared as multisets."""
    return record_is_k_dual(f_process(ftv, k_cap))


def record_is_k_dual(rec: FProcessRecord) -> bool:
    return column_permutation(rec.M_ab, transpose(rec.first.M_a)) is not None


def aligned_c(rec: FProcessRecord) -> list[int] | None:
    """``c`` re-indexed along the columns of ``V`` via the recorded permutation."""
    perm = rec.evidence.get("permutation")
    if perm is None:
        return None
    return [rec.c[j] for j in perm]

"""Presentation of rank-one duals as quotients of weighted projective spaces.

For a fan matrix ``Lambda`` with ``n+1`` rays the toric variety is
``P(q) / G`` with ``q`` the reduced weight vector and ``G`` a finite
abelian group.  This module computes ``q``, the invariant factors of ``G``
and an integer matrix ``Gamma`` describing how ``G`` scales the
homogeneous coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import lcm, prod
from typing import Sequence

from .errors import (
    ConventionViolated,
    InvariantViolation,
    NoIntegerFactorization,
    NotRank1,
    ValidationFailed,
)
from .exact_linalg import (
    as_int_matrix,
    det,
    gcd_list,
    hnf,
    integer_kernel,
    inverse,
    matmul,
    primitive,
    smith_diagonal,
    snf,
    solve_square,
    transpose,
)
from itertools import combinations


@dataclass
class TorsionData:
    taus: list[int]
    gamma: list[list[int]]
    order: int
    witness: dict = field(default_factory=dict)


def reduce_weights(q: Sequence[int]) -> list[int]:
    """Normalise a positive weight vector so that any ``len(q)-1`` entries are coprime."""
    q = primitive(list(q))
    changed = True
    while changed:
        changed = False
        for i in range(len(q)):
            g = gcd_list(q[:i] + q[i + 1:])
            if g > 1:
                q = [x if j == i else x // g for j, x in enumerate(q)]
                changed = True
    return q


def weight_vector_rank1(Lambda: Sequence[Sequence[int]], reduce: bool = True) -> list[int]:
    """Positive generator of the integer kernel of an ``n x (n+1)`` fan matrix."""
    L = as_int_matrix(Lambda)
    n, m = len(L), len(L[0])
    if m != n + 1:
        raise NotRank1(f"expected {n + 1} rays, got {m}")
    K = integer_kernel(L)
    if len(K) != 1:
        raise NotRank1("kernel is not one-dimensional")
    q = K[0]
    if all(x <= 0 for x in q):
        q = [-x for x in q]
    if any(x <= 0 for x in q):
        raise NotRank1("kernel generator is not strictly positive: not a complete fan")
    return reduce_weights(q) if reduce else q


def wps_fan_matrix(q: Sequence[int]) -> list[list[int]]:
    """A fan matrix of ``P(q)``: the last ``n`` rows of a unimodular ``U`` with ``U q^T = e_1``."""
    _, U = hnf([[x] for x in q])
    return U[1:]


def _solve_left(L, Lt) -> list[list[int]]:
    """Integer ``B`` with ``B . Lt == L`` (both ``n x (n+1)``, same kernel)."""
    n = len(Lt)
    for cols in combinations(range(len(Lt[0])), n):
        S = [[Lt[i][j] for j in cols] for i in range(n)]
        if det(S) == 0:
            continue
        Sinv = inverse(S)
        LS = [[L[i][j] for j in cols] for i in range(n)]
        Bq = matmul(LS, Sinv)
        if any(x.denominator != 1 for r in Bq for x in r):
            raise NoIntegerFactorization("rational but non-integral factor")
        B = [[int(x) for x in r] for r in Bq]
        if matmul(B, Lt) != [list(r) for r in L]:
            raise NoIntegerFactorization("factor does not reproduce the fan matrix")
        return B
    raise NoIntegerFactorization("reference fan matrix has rank < n")


def torsion_coefficients(Lambda, LambdaTilde) -> list[int]:
    """Invariant factors ``> 1`` of the integer ``B`` with ``B . LambdaTilde = Lambda``."""
    B = _solve_left(as_int_matrix(Lambda), as_int_matrix(LambdaTilde))
    return [abs(t) for t in smith_diagonal(B) if abs(t) > 1]


def torsion_matrix(q: Sequence[int], Lambda) -> TorsionData:
    """Run the five-step HNF/SNF construction of the torsion matrix and validate it."""
    L = as_int_matrix(Lambda)
    n = len(L)
    Lt0 = wps_fan_matrix(q)
    B = _solve_left(L, Lt0)
    # step 1: P . L = beta . (Qs^-1 . Lt0)
    D, P, Qs = snf(B)
    diag = [D[i][i] for i in range(n)]
    Lt = [[int(x) for x in r] for r in matmul(inverse(Qs), Lt0)]
    taus = [t for t in diag if t > 1]
    s = len(taus)
    if s == 0:
        return TorsionData([], [], 1)
    # step 2: U_q = (u ; Lt) with U_q q^T = e_1
    _, Uh = hnf([[x] for x in q])
    u = Uh[0]
    Uq = [u] + Lt
    if [sum(a * b for a, b in zip(r, q)) for r in Uq] != [1] + [0] * n:
        raise ValidationFailed("U_q does not send q to e_1", {"property": "step2"})
    # step 3
    top = Uq[: n + 1 - s]
    _, W = hnf(transpose(top))
    sW = W[n + 1 - s:]
    # step 4
    sLt = Lt[n - s:]
    G = matmul(sLt, transpose(sW))
    # step 5
    _, UG = hnf(transpose(G))
    gamma = matmul(UG, sW)
    Gamma = [[x % t for x in row] for row, t in zip(gamma, taus)]
    data = TorsionData(taus, Gamma, prod(taus))
    data.witness = validate_torsion(data, u, L)
    return data


def validate_torsion(data: TorsionData, u: Sequence[int], Lambda) -> dict:
    """Check the characterising properties of a torsion matrix.

    (i) rows reduced mod their tau, (ii) rows annihilate ``u``,
    (iii) rows annihilate the rows of ``Lambda``, (iv) the rows generate
    the full group (checked existentially via a Smith form).
    """
    taus, Gamma = data.taus, data.gamma
    for k, (row, t) in enumerate(zip(Gamma, taus)):
        if any(not 0 <= x < t for x in row):
            raise ValidationFailed("entry not reduced", {"property": 1, "row": k})
        if sum(a * b for a, b in zip(row, u)) % t:
            raise ValidationFailed("Gamma u^T != 0", {"property": 2, "row": k})
        for lrow in Lambda:
            if sum(a * b for a, b in zip(row, lrow)) % t:
                raise ValidationFailed("Gamma Lambda^T != 0", {"property": 3, "row": k})
    s = len(taus)
    M = [list(row) + [t if j == k else 0 for j in range(s)] for k, (row, t) in enumerate(zip(Gamma, taus))]
    diag = smith_diagonal(M)
    if any(d != 1 for d in diag):
        raise ValidationFailed("rows do not generate the group", {"property": 4, "smith": diag})
    return {"surjectivity_smith": diag}


def action_lattice(gamma: Sequence[Sequence[int]], taus: Sequence[int],
                   weights: Sequence[int] | None = None) -> list[list[int]]:
    """HNF of the subgroup of ``(Q/Z)^{n+1}`` generated by the rows ``gamma_k / tau_k``.

    Everything is scaled by ``T = lcm(taus)``; passing ``weights`` also adds
    the finite part of the diagonal ``C^*``-action.
    """
    if not taus:
        return []
    T = lcm(*taus)
    width = len(gamma[0])
    gens = [[x * (T // t) for x in row] for row, t in zip(gamma, taus)]
    gens += [[T if j == i else 0 for j in range(width)] for i in range(width)]
    if weights is not None:
        gens.append(list(weights))
    H, _ = hnf(gens)
    return [r for r in H if any(r)]


def same_action(g1, t1, g2, t2, weights=None) -> bool:
    """Whether two torsion matrices generate the same group of diagonal scalings."""
    if sorted(t1) != sorted(t2):
        return False
    return action_lattice(g1, t1, weights) == action_lattice(g2, t2, weights)


def class_group_torsion(Lambda) -> list[int]:
    """Invariant factors ``> 1`` of ``Z^m / Lambda^T Z^n`` (works for any rank)."""
    return [t for t in smith_diagonal(transpose(as_int_matrix(Lambda))) if t > 1]


def check_convention(a: Sequence[int]) -> None:
    if list(a) != sorted(a) or gcd_list(a) != 1 or min(a) < 1:
        raise ConventionViolated("framing must be positive, sorted ascending and with gcd 1")


def group_order(a: Sequence[int], k_cap: int = 1000) -> int:
    """Order of the quotient group for the dual of a framing of projective space."""
    from .ftv_core import FramedToricVariety, f_dual
    from .varieties import projective_space

    check_convention(a)
    n = len(a) - 1
    rec = f_dual(FramedToricVariety(projective_space(n), a), k_cap)
    q = weight_vector_rank1(rec.Lambda_a)
    taus = torsion_coefficients(rec.Lambda_a, wps_fan_matrix(q))
    order = prod(taus)
    expected = sum(a) ** (n - 1)
    if order != expected:
        raise InvariantViolation("group order differs from |a|^(n-1)",
                                 {"order": order, "expected": expected, "taus": taus})
    return order


def pn_vertex_fan_matrix(a: Sequence[int]) -> list[list[int]]:
    """Fan matrix of the dual of ``(P^n, a)`` with column ``i`` opposite the ``i``-th facet.

    Column ``i`` is the primitive direction of the vertex
    ``-((V with column i removed)^T)^{-1} (a with entry i removed)``.
    """
    from .varieties import projective_space

    n = len(a) - 1
    V = projective_space(n)
    cols = []
    for i in range(n + 1):
        keep = [j for j in range(n + 1) if j != i]
        S = [[V[r][j] for r in range(n)] for j in keep]  # (V^{i})^T
        m = solve_square(S, [-a[j] for j in keep])
        den = lcm(*[x.denominator for x in m])
        cols.append(primitive([int(x * den) for x in m]))
    return transpose(cols)


def reference_gamma(n: int, d: int) -> list[list[int]]:
    """Reference torsion matrix ``(I_{n-1} | 0 | (d-1) 1) mod d``."""
    return [[int(i == j) for j in range(n - 1)] + [0, (d - 1) % d] for i in range(n - 1)]

"""Mirror families: Cox-coordinate exponent matrices, projective-space mirrors,
moduli counts, LG superpotentials and sub-family duals."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .errors import (
    AssumptionFailed,
    DegreeOutOfRange,
    DegreeTooSmall,
    InvariantViolation,
    NegativeExponent,
)
from .exact_linalg import (
    as_int_matrix,
    column_permutation,
    columns,
    gcd_list,
    integer_kernel,
    matvec,
    rank,
    transpose,
)
from .ftv_core import (
    FramedToricVariety,
    f_dual,
    f_polytope,
    f_process,
    minimal_shift,
)
from .polyhedra import (
    LatticePolytope,
    RationalPolytope,
    divisor_polytope,
    facet_interior_lattice_counts,
    integer_part,
    primitive_vertex_matrix,
)
from .quotient_structure import (
    TorsionData,
    check_convention,
    pn_vertex_fan_matrix,
    reduce_weights,
    torsion_matrix,
    weight_vector_rank1,
)
from .varieties import projective_space

Exponent = tuple[int, ...]


@dataclass
class ExponentMatrix:
    """Exponent vectors (one per monomial) of a polynomial in Cox coordinates.

    ``degree`` holds the common free degree ``Q . column``; ``torsion_degree``
    the common residues ``Gamma . column mod tau`` when torsion data was given.
    ``origin`` is the index of the monomial coming from the origin, if any.
    """

    var_count: int
    columns: list[Exponent]
    degree: tuple[int, ...] = ()
    torsion_degree: tuple[int, ...] | None = None
    origin: int | None = None

    def __len__(self) -> int:
        return len(self.columns)

    def as_set(self) -> set[Exponent]:
        return set(self.columns)

    def matrix(self) -> list[list[int]]:
        return [[c[i] for c in self.columns] for i in range(self.var_count)]

    def permuted(self, perm: Sequence[int]) -> "ExponentMatrix":
        """Re-index variables: new variable ``i`` is old variable ``perm[i]``."""
        cols = [tuple(c[j] for j in perm) for c in self.columns]
        return ExponentMatrix(self.var_count, cols, self.degree, self.torsion_degree, self.origin)


@dataclass
class LaurentExponentMatrix:
    var_count: int
    columns: list[Exponent]
    origin: int | None = None

    def __len__(self) -> int:
        return len(self.columns)

    def as_set(self) -> set[Exponent]:
        return set(self.columns)

    def permuted(self, perm: Sequence[int]) -> "LaurentExponentMatrix":
        return LaurentExponentMatrix(self.var_count, [tuple(c[j] for j in perm) for c in self.columns],
                                     self.origin)


@dataclass
class ModuliReport:
    m_Y: int
    m_Yvee: int | None
    k: int
    m_d_n: int | None = None
    flags: list[str] = field(default_factory=list)


# ---------------------------------------------------------------- degrees


def common_degree(cols: Sequence[Exponent], Q: Sequence[Sequence[int]]) -> tuple[int, ...]:
    degs = {tuple(matvec(Q, c)) for c in cols} if Q else {()}
    if len(degs) > 1:
        raise InvariantViolation("monomials of different degrees", {"degrees": sorted(degs)})
    return degs.pop() if degs else ()


def common_torsion_degree(cols: Sequence[Exponent], torsion: TorsionData) -> tuple[int, ...]:
    degs = {tuple(sum(g * x for g, x in zip(row, c)) % t for row, t in zip(torsion.gamma, torsion.taus))
            for c in cols}
    if len(degs) > 1:
        raise InvariantViolation("monomials of different torsion degrees", {"degrees": sorted(degs)})
    return degs.pop() if degs else ()


def exponent_matrix(fan, shift, points, torsion: TorsionData | None = None) -> ExponentMatrix:
    """Columns ``fan^T p + shift``; checks non-negativity and a common class degree."""
    F = as_int_matrix(fan)
    FT = transpose(F)
    cols = []
    origin = None
    for idx, p in enumerate(points):
        c = tuple(sum(r[i] * p[i] for i in range(len(p))) + s for r, s in zip(FT, shift))
        if min(c) < 0:
            raise NegativeExponent("lattice point outside the divisor polytope",
                                   {"point": list(p), "exponent": list(c)})
        if not any(p):
            origin = idx
        cols.append(c)
    Q = integer_kernel(F)
    deg = common_degree(cols, Q)
    tdeg = common_torsion_degree(cols, torsion) if torsion and torsion.taus else None
    return ExponentMatrix(len(shift), cols, deg, tdeg, origin)


def family_monomials(V, a, points, k: int = 1, torsion: TorsionData | None = None) -> ExponentMatrix:
    """Columns ``V^T m + k a`` for the given lattice points ``m``."""
    return exponent_matrix(V, [k * x for x in a], points, torsion)


def mirror_monomials(Lambda_a, b, points, torsion: TorsionData | None = None) -> ExponentMatrix:
    """Columns ``Lambda_a^T n + b`` for the given lattice points ``n``."""
    return exponent_matrix(Lambda_a, b, points, torsion)


def laurent_superpotential(exponents: ExponentMatrix, shift: Sequence[int]) -> LaurentExponentMatrix:
    """Divide by the monomial ``x^shift``."""
    cols = [tuple(x - s for x, s in zip(c, shift)) for c in exponents.columns]
    return LaurentExponentMatrix(exponents.var_count, cols, exponents.origin)


def modulus_slots(cols: Sequence[Exponent], prefer: Sequence[int] = ()) -> list[int]:
    """Indices of coefficients that survive torus rescaling.

    Rescaling the Cox variables and the whole polynomial acts on coefficients
    through the rows of ``(exponents ; 1)``; columns outside a greedy basis
    of that row space's column space carry genuine moduli.  Indices in
    ``prefer`` are offered to the basis last, so they become slots first.
    """
    order = sorted(range(len(cols)), key=lambda i: (i in prefer, cols[i]))
    basis: list[Exponent] = []
    slots = []
    for i in order:
        trial = basis + [tuple(cols[i]) + (1,)]
        if rank(trial) > len(basis):
            basis = trial
        else:
            slots.append(i)
    return slots


# ---------------------------------------------------------------- rendering


def _monomial_text(c: Exponent, latex: bool) -> str:
    parts = []
    for i, e in enumerate(c, start=1):
        if e == 0:
            continue
        var = f"x_{{{i}}}" if latex else f"x{i}"
        if e == 1:
            parts.append(var)
        else:
            parts.append(f"{var}^{{{e}}}" if latex else f"{var}^{e}")
    return ("" if latex else "*").join(parts)


def render(cols: Sequence[Exponent], fmt: str = "text", moduli: Sequence[int] = ()) -> str:
    """Polynomial string; coefficients ``c_i`` with modulus slots named psi, phi, ..."""
    names = ["psi", "phi", "chi", "omega"]
    lnames = ["\\psi", "\\varphi", "\\chi", "\\omega"]
    latex = fmt == "latex"
    order = sorted(range(len(cols)), key=lambda i: cols[i])
    mod_names = {}
    for j, i in enumerate(sorted(moduli, key=lambda i: cols[i])):
        pool = lnames if latex else names
        mod_names[i] = pool[j] if j < len(pool) else (f"t_{{{j}}}" if latex else f"t{j}")
    terms = []
    count = 0
    for i in order:
        if i in mod_names:
            coeff = mod_names[i]
        else:
            count += 1
            coeff = f"c_{{{count}}}" if latex else f"c{count}"
        mono = _monomial_text(cols[i], latex)
        if not mono:
            terms.append(coeff)
        else:
            terms.append(f"{coeff}{' ' if latex else '*'}{mono}")
    return " + ".join(terms) if terms else "0"


# ---------------------------------------------------------------- projective space


@dataclass
class PnMirror:
    a: list[int]
    d: list[int]
    q: list[int]
    b: list[int]
    Lambda: list[list[int]]
    torsion: TorsionData
    condition_a: bool
    condition_b: bool
    calibrated: bool
    evidence: dict = field(default_factory=dict)


def _condition_a(a: Sequence[int]) -> bool:
    n = len(a) - 1
    an = a[n - 1]
    verts = [tuple([Fraction(0)] * n)]
    floors = [tuple([0] * n)]
    for i in range(1, n + 1):
        coeff = Fraction(an, a[n - i])
        verts.append(tuple(coeff if j == i - 1 else Fraction(0) for j in range(n)))
        floors.append(tuple(int(coeff) if j == i - 1 else 0 for j in range(n)))
    lhs = integer_part(RationalPolytope(verts))
    rhs = LatticePolytope(floors)
    return lhs == rhs


def pn_mirror(a: Sequence[int], k_cap: int = 1000) -> PnMirror:
    """Closed-form dual data of ``(P^n, a)`` cross-checked against the generic engine."""
    a = [int(x) for x in a]
    check_convention(a)
    n = len(a) - 1
    d = [gcd_list(a[:i] + a[i + 1:]) for i in range(n + 1)]
    q = reduce_weights(a)
    b = [a[n] // d[i] for i in range(n)] + [a[n - 1] // d[n]]
    Lam = pn_vertex_fan_matrix(a)
    V = projective_space(n)
    M = [[sum(V[k][i] * Lam[k][j] for k in range(n)) for j in range(n + 1)] for i in range(n + 1)]
    b_engine = minimal_shift(M, 1)
    q_engine = weight_vector_rank1(Lam)
    cond_a = _condition_a(a)
    cond_b = sum(1 for x in d if x == 1) >= 2
    rec = f_process(FramedToricVariety(V, a), k_cap)
    evidence = {
        "b_engine": b_engine,
        "q_engine": q_engine,
        "calibrated_engine": rec.calibrated,
        "k0": rec.k0,
    }
    torsion = torsion_matrix(q_engine, Lam)
    calibrated = cond_a and cond_b
    return PnMirror(a, d, q, b, Lam, torsion, cond_a, cond_b, calibrated, evidence)


def canonical_mirror_polynomial(n: int, d: int) -> tuple[ExponentMatrix, list[str]]:
    """Monomials of the canonical degree-``d`` mirror in ``P^n`` and their coefficient roles."""
    if d <= n:
        raise DegreeTooSmall(f"degree {d} <= n = {n}; use the LG construction")
    cols = []
    for i in range(n):
        cols.append(tuple((d - n - 1) + (d if j == i else 0) for j in range(n)) + (0,))
    cols.append(tuple([0] * n) + (n + 1,))
    cols.append(tuple([d - n] * n) + (1,))
    roles = ["unit"] * (n + 1) + ["psi"]
    q = [1] * n + [d - n]
    deg = common_degree(cols, [q])
    return ExponentMatrix(n + 1, cols, deg, None, n + 1), roles


def hori_vafa(n: int, d: int) -> tuple[ExponentMatrix, list[int]]:
    """Canonical mirror data together with the gauge weight row of the C^*-action."""
    em, _ = canonical_mirror_polynomial(n, d)
    return em, [1] * n + [d - n]


# ---------------------------------------------------------------- moduli


def _anticanonical_interior(fan) -> tuple[int, bool]:
    P = divisor_polytope(fan, [1] * len(fan[0]))
    return sum(facet_interior_lattice_counts(P)), P.is_lattice


def moduli_counts(V, a, k_cap: int = 1000, dual: bool = True, record=None) -> ModuliReport:
    """Combinatorial moduli counts of the family and (optionally) its f-mirror.

    Pass an existing f-process ``record`` to avoid recomputing it.
    """
    V = as_int_matrix(V)
    n = len(V)
    ftv = FramedToricVariety(V, a)
    if record is not None:
        P = record.first.delta
    else:
        _, P = f_polytope(ftv, k_cap)
    s_X, lat_X = _anticanonical_interior(V)
    flags = [] if lat_X else ["anticanonical polytope of X is not a lattice polytope"]
    m_Y = len(P.lattice_points()) - 1 - n - s_X
    m_Yvee = None
    if dual:
        rec = record if record is not None else f_process(ftv, k_cap)
        s_D, lat_D = _anticanonical_interior(rec.Lambda_a)
        if not lat_D:
            flags.append("anticanonical polytope of the dual is not a lattice polytope")
        m_Yvee = len(rec.second.points) - 1 - n - s_D
    k = len(integer_part(RationalPolytope(columns(V))).lattice_points()) - 1 - n
    m_d_n = None
    if n + 1 == len(V[0]) and all(V[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n)) \
            and all(V[i][n] == -1 for i in range(n)):
        m_d_n = m_d_n_formula(n, sum(a))
    return ModuliReport(m_Y, m_Yvee, k, m_d_n, flags)


def m_d_n_formula(n: int, d: int) -> int:
    return comb(n + d, d) - (n + 1) ** 2


# ---------------------------------------------------------------- LG models


@dataclass
class GiventalReport:
    n: int
    d: int
    Lambda: list[list[int]]
    b: list[int]
    superpotential: LaurentExponentMatrix
    expected: set
    matches: bool
    product_identity: bool
    sum_identity: bool


def weak_mirror_points(V) -> list[tuple[int, ...]]:
    """Lattice points of ``conv(V)``: the dual polyhedron of a weak framing is unbounded,
    so the mirror polynomial is generated by these points instead."""
    return integer_part(RationalPolytope(columns(as_int_matrix(V)))).lattice_points()


def givental_lambda(n: int, d: int) -> list[list[int]]:
    """Fan matrix of the weak dual of ``(P^n, (1_d, 0))`` in the reference column order."""
    if d == 1:
        return [[-1] * n] + [[int(i == j) for j in range(n - 1)] + [0] for i in range(n - 1)]
    top = [[-1 + (d if j == i else 0) for j in range(n + 1)] for i in range(d)]
    bottom = [[0] * d + [d if j == i else 0 for j in range(n - d)] + [0] for i in range(n - d)]
    return top + bottom


def _givental_expected(n: int, d: int) -> set:
    if d == 1:
        out = {tuple([0] * n), tuple([-1] * n)}
        out |= {tuple(int(i == j) for j in range(n)) for i in range(n)}
        return out
    N = n + 1
    out = {tuple([0] * N)}
    out |= {tuple(d * int(i == j) - 1 for j in range(N)) for i in range(d)}
    out |= {tuple(d * int(i == j) for j in range(N)) for i in range(d, N)}
    return out


def _u_exponents(n: int, d: int) -> list[tuple[int, ...]]:
    """Exponent vectors ``(x..., psi)`` of the re-parameterised Givental variables."""
    if d == 1:
        us = [tuple(int(i == j) for j in range(n)) + (-1,) for i in range(n)]
        us.append(tuple([-1] * n) + (-1,))
        return us
    N = n + 1
    us = [tuple(d * int(i == j) - 1 for j in range(N)) + (-1,) for i in range(d)]
    us += [tuple(d * int(i == j) for j in range(N)) + (-1,) for i in range(d, N)]
    return us


def givental_pn(n: int, d: int) -> GiventalReport:
    """Weak f-dual LG model of ``(P^n, (1_d, 0))`` and the Givental identities."""
    if not 1 <= d <= n:
        raise DegreeOutOfRange(f"need 1 <= d <= n, got d={d}, n={n}")
    a = [1] * d + [0] * (n + 1 - d)
    rec = f_dual(FramedToricVariety(projective_space(n), a, weak=True))
    ref = givental_lambda(n, d)
    perm = column_permutation(ref, rec.Lambda_a)
    if perm is None:
        raise InvariantViolation("weak dual fan matrix differs from the reference",
                                 {"computed": rec.Lambda_a, "reference": ref})
    b_ref = [rec.b[j] for j in perm]
    em = mirror_monomials(rec.Lambda_a, rec.b, weak_mirror_points(projective_space(n)))
    W = laurent_superpotential(em, rec.b).permuted(perm)
    expected = _givental_expected(n, d)
    us = _u_exponents(n, d)
    product_identity = all(sum(u[i] for u in us) == 0 for i in range(len(us[0]) - 1)) \
        and sum(u[-1] for u in us) == -len(us)
    # (1/psi) f - 1 : the constant term psi/psi drops, every x-monomial gains psi^-1
    scaled = {c + (-1,) for c in W.as_set() if any(c)}
    sum_identity = scaled == set(us) and tuple([0] * W.var_count) in W.as_set()
    return GiventalReport(n, d, ref, b_ref, W, expected, W.as_set() == expected,
                          product_identity, sum_identity)


# ---------------------------------------------------------------- sub-families


@dataclass
class SubfamilyReport:
    V_Delta: list[list[int]]
    v: list[int]
    Lambda_v: list[list[int]]
    w: list[int]
    assumption3: bool
    assumption4: bool
    delta_w_equals_delta: bool
    f_delta: ExponentMatrix
    f_dual: ExponentMatrix
    bhk_primal: ExponentMatrix
    bhk_dual: ExponentMatrix
    evidence: dict = field(default_factory=dict)


def subfamily_dual(V, a, Delta: LatticePolytope, k_cap: int = 1000, strict: bool = True) -> SubfamilyReport:
    """ACG dual of the sub-family with Newton polytope ``Delta`` and its vertex (BHK) restriction."""
    V = as_int_matrix(V)
    ftv = FramedToricVariety(V, a)
    main = f_process(ftv, k_cap)
    if not main.calibrated:
        raise AssumptionFailed("the ambient framed variety is not calibrated", {"assumption": 2})
    P = main.first.delta
    if not all(P.contains(x) for x in Delta.vertices):
        raise AssumptionFailed("Delta is not contained in the f-polytope", {"assumption": 1})
    VD = primitive_vertex_matrix(Delta)
    M = [[sum(VD[k][i] * V[k][j] for k in range(len(V))) for j in range(len(V[0]))] for i in range(len(VD[0]))]
    v = [max([1] + [-x for x in row]) for row in M]
    sub = FramedToricVariety(VD, v, check=False)
    sub_rec = f_process(sub, k_cap)
    assumption3 = sub_rec.calibrated
    Db = integer_part(divisor_polytope(main.Lambda_a, main.b))
    Dv = integer_part(divisor_polytope(VD, v))
    assumption4 = all(Dv.contains(x) for x in Db.vertices)
    evidence = {"calibration": sub_rec.evidence}
    if strict and not assumption3:
        raise AssumptionFailed("(X_Delta, v) is not calibrated", {"assumption": 3, **evidence})
    if strict and not assumption4:
        raise AssumptionFailed("[Delta_b] is not inside [Delta_v]", {"assumption": 4})
    sub_first = sub_rec.first
    Dw = integer_part(divisor_polytope(sub_first.Lambda_a, sub_first.b))
    f_delta = family_monomials(V, a, Delta.lattice_points())
    f_dual_em = exponent_matrix(VD, v, Db.lattice_points(), None)
    bhk_primal = family_monomials(V, a, [tuple(int(x) for x in p) for p in Delta.vertices])
    bhk_dual = exponent_matrix(VD, v, [tuple(int(x) for x in p) for p in Db.vertices], None)
    return SubfamilyReport(VD, v, sub_first.Lambda_a, sub_first.b, assumption3, assumption4,
                           Dw == Delta, f_delta, f_dual_em, bhk_primal, bhk_dual, evidence)

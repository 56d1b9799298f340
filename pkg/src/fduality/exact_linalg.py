"""Exact integer and rational linear algebra.

Matrices are plain ``list[list[int]]`` (row-major) or lists of ``Fraction``
rows.  Nothing in here touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from math import gcd
from typing import Iterable, Sequence

from .errors import (
    InputError,
    PositivizationFailed,
    RankDeficient,
    Singular,
    ZeroVector,
)

IntMatrix = list[list[int]]
IntVector = list[int]


# ---------------------------------------------------------------- basics

def as_int_matrix(A: Iterable[Iterable]) -> IntMatrix:
    """Copy ``A`` into a fresh list-of-lists of Python ints, rejecting non-integers."""
    out = []
    for row in A:
        r = []
        for x in row:
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise InputError(f"non-integer entry {x}")
                x = x.numerator
            if isinstance(x, bool) or int(x) != x:
                raise InputError(f"non-integer entry {x!r}")
            r.append(int(x))
        out.append(r)
    if not out or not out[0]:
        raise InputError("matrix must have at least one row and one column")
    width = len(out[0])
    if any(len(r) != width for r in out):
        raise InputError("ragged matrix")
    return out


def shape(A: Sequence[Sequence]) -> tuple[int, int]:
    return len(A), (len(A[0]) if A else 0)


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(A: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*A)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence], v: Sequence) -> list:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def columns(A: Sequence[Sequence]) -> list[tuple]:
    return [tuple(c) for c in zip(*A)]


def from_columns(cols: Sequence[Sequence]) -> list[list]:
    return [list(r) for r in zip(*cols)]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def gcd_list(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g


def primitive(v: Sequence[int]) -> IntVector:
    """Divide an integer vector by the gcd of its entries, keeping its direction."""
    g = gcd_list(v)
    if g == 0:
        raise ZeroVector("the zero vector has no primitive generator")
    return [x // g for x in v]


# ---------------------------------------------------------------- determinants and rank

def det(A: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by Bareiss fraction-free elimination."""
    n = len(A)
    if any(len(r) != n for r in A):
        raise InputError("determinant needs a square matrix")
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        pivot = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * pivot - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = pivot
    return sign * M[n - 1][n - 1]


def rank(A: Sequence[Sequence]) -> int:
    M = [[Fraction(x) for x in r] for r in A]
    rows, cols = shape(M)
    r = 0
    for j in range(cols):
        piv = next((i for i in range(r, rows) if M[i][j] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, rows):
            if M[i][j] != 0:
                f = M[i][j] / M[r][j]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
        if r == rows:
            break
    return r


def solve_square(A: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Exact solution of ``A x = b`` for square non-singular ``A``."""
    n = len(A)
    if any(len(r) != n for r in A) or len(b) != n:
        raise InputError("solve_square needs a square system")
    M = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    for j in range(n):
        piv = next((i for i in range(j, n) if M[i][j] != 0), None)
        if piv is None:
            raise Singular("matrix is singular")
        M[j], M[piv] = M[piv], M[j]
        inv = 1 / M[j][j]
        M[j] = [x * inv for x in M[j]]
        for i in range(n):
            if i != j and M[i][j] != 0:
                f = M[i][j]
                M[i] = [a - f * c for a, c in zip(M[i], M[j])]
    return [M[i][n] for i in range(n)]


def inverse(A: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(A)
    cols = [solve_square(A, [int(i == j) for i in range(n)]) for j in range(n)]
    return from_columns(cols)


# ---------------------------------------------------------------- normal forms

def _row_combine(M, r, i, x, y, u, v):
    """Replace rows r, i of M by x*Mr + y*Mi and u*Mr + v*Mi."""
    Rr, Ri = M[r], M[i]
    M[r] = [x * p + y * q for p, q in zip(Rr, Ri)]
    M[i] = [u * p + v * q for p, q in zip(Rr, Ri)]


def hnf(A: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U @ A == H``.  Pivots are
    positive and the entries above each pivot lie in ``[0, pivot)``.
    """
    H = as_int_matrix(A)
    m, n = shape(H)
    U = identity(m)
    r = 0
    for j in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            b = H[i][j]
            if b == 0:
                continue
            a = H[r][j]
            g, x, y = xgcd(a, b)
            u, v = -b // g, a // g
            _row_combine(H, r, i, x, y, u, v)
            _row_combine(U, r, i, x, y, u, v)
        p = H[r][j]
        if p == 0:
            continue
        if p < 0:
            H[r] = [-t for t in H[r]]
            U[r] = [-t for t in U[r]]
            p = -p
        for i in range(r):
            q = H[i][j] // p
            if q:
                H[i] = [s - q * t for s, t in zip(H[i], H[r])]
                U[i] = [s - q * t for s, t in zip(U[i], U[r])]
        r += 1
    return H, U


def snf(A: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form ``(D, P, Q)`` with ``P @ A @ Q == D``.

    ``P`` and ``Q`` are unimodular, ``D`` is diagonal with non-negative
    entries forming a divisibility chain.
    """
    D = as_int_matrix(A)
    m, n = shape(D)
    P, Q = identity(m), identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        P[i], P[j] = P[j], P[i]

    def swap_cols(i, j):
        for M in (D, Q):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):
        D[dst] = [a + f * b for a, b in zip(D[dst], D[src])]
        P[dst] = [a + f * b for a, b in zip(P[dst], P[src])]

    def add_col(dst, src, f):
        for M in (D, Q):
            for row in M:
                row[dst] += f * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return D, P, Q
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = D[t][t]
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    clean = clean and D[i][t] == 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    clean = clean and D[t][j] == 0
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            P[t] = [-x for x in P[t]]
    return D, P, Q


def smith_diagonal(A: Sequence[Sequence[int]]) -> list[int]:
    D, _, _ = snf(A)
    return [D[i][i] for i in range(min(shape(D)))]


# ---------------------------------------------------------------- kernels and Gale duality

def integer_kernel(A: Sequence[Sequence[int]]) -> IntMatrix:
    """Rows forming a lattice basis of ``{x in Z^m : A x = 0}``."""
    At = transpose(as_int_matrix(A))
    H, U = hnf(At)
    return [U[i] for i in range(len(H)) if not any(H[i])]


def _positive_basis(K: IntMatrix, bound: int) -> IntMatrix | None:
    r = len(K)
    cands = []
    for c in product(range(-bound, bound + 1), repeat=r):
        if not any(c) or gcd_list(c) != 1:
            continue
        row = [sum(ci * K[i][j] for i, ci in enumerate(c)) for j in range(len(K[0]))]
        if min(row) >= 0:
            cands.append((sum(row), [-x for x in row], list(c), row))
    cands.sort()
    cands = cands[:40]
    for combo in combinations(cands, r):
        T = [c[2] for c in combo]
        if abs(det(T)) == 1:
            return sorted((c[3] for c in combo), reverse=True)
    return None


def gale_dual(V: Sequence[Sequence[int]], bound: int = 4, entry_bound: int = 8) -> IntMatrix:
    """Weight matrix ``Q`` (r x m) whose rows span the integer kernel of ``V``.

    A non-negative basis is searched over integer combinations of a kernel
    basis with coefficients in ``[-bound, bound]``; failing that, among
    non-negative kernel vectors with entries up to ``entry_bound``.  Raises
    ``PositivizationFailed`` when neither search succeeds.
    """
    V = as_int_matrix(V)
    n, m = shape(V)
    if rank(V) < n:
        raise RankDeficient(f"fan matrix has rank {rank(V)} < {n}")
    K = integer_kernel(V)
    if not K:
        return []
    # try the raw basis, then its HNF, then the HNF taken from the right
    H = hnf(K)[0]
    Hr = [row[::-1] for row in hnf([row[::-1] for row in K])[0]]
    bases = [K, H, Hr]
    for b in range(1, bound + 1):
        for B in bases:
            Q = _positive_basis(B, b)
            if Q is not None:
                return Q
    Q = _positive_basis_by_entries(V, H, entry_bound)
    if Q is None:
        Q = _positive_basis_through_interior(V, H)
    if Q is None:
        raise PositivizationFailed(
            "the kernel of V has no strictly positive vector, so no non-negative basis was found")
    return Q


def _positive_basis_through_interior(V: IntMatrix, H: IntMatrix) -> IntMatrix | None:
    """Non-negative kernel basis built around a strictly positive kernel vector.

    With ``p`` primitive and strictly positive, extend it to a lattice basis
    ``p, f_2, ..., f_r`` and push every ``f_i`` along ``p`` until it is
    non-negative.  The result stays a basis; a greedy pass then subtracts
    rows from one another while they remain non-negative.
    """
    x = lp_feasible(V, [-sum(row) for row in V])
    if x is None:
        return None
    x = [t + 1 for t in x]
    den = 1
    for t in x:
        den = den * t.denominator // gcd(den, t.denominator)
    c = primitive(_lattice_coords(H, [int(t * den) for t in x]))
    r = len(H)
    _, U = hnf([[t] for t in c])
    basis = transpose([[int(t) for t in row] for row in inverse(U)])  # rows; first is +-c
    to_x = lambda coeffs: [sum(k * h for k, h in zip(coeffs, col)) for col in zip(*H)]
    px = to_x(c)
    rows = [px]
    for f in basis[1:]:
        fx = to_x(f)
        N = max([0] + [-(-(-a) // b) for a, b in zip(fx, px) if a < 0])
        rows.append([a + N * b for a, b in zip(fx, px)])
    changed = True
    while changed:
        changed = False
        for i in range(r):
            for j in range(r):
                if i != j and any(rows[j]) and all(a >= b for a, b in zip(rows[i], rows[j])):
                    rows[i] = [a - b for a, b in zip(rows[i], rows[j])]
                    changed = True
    return sorted(rows, reverse=True)


def _lattice_coords(H: IntMatrix, x: Sequence[int]) -> list[int]:
    """Coordinates of ``x`` in the row basis ``H`` (row-style HNF, ``x`` in its span)."""
    res = list(x)
    coords = []
    for row in H:
        p = next(j for j, t in enumerate(row) if t)
        c = res[p] // row[p]
        coords.append(c)
        res = [u - c * v for u, v in zip(res, row)]
    return coords


def _positive_basis_by_entries(V: IntMatrix, H: IntMatrix, entry_bound: int,
                               max_box: int = 20_000_000) -> IntMatrix | None:
    from ._kernels import scan_box

    m, r = len(V[0]), len(H)
    A = [list(row) for row in V] + [[-x for x in row] for row in V]
    for e in range(1, entry_bound + 1):
        if (e + 1) ** m > max_box:
            break
        pts = scan_box(A, [0] * len(A), [0] * m, [e] * m)
        cands = sorted({tuple(int(t) for t in p) for p in pts if any(p) and gcd_list(p) == 1},
                       key=lambda p: (sum(p), p))[:40]
        coords = {p: _lattice_coords(H, p) for p in cands}
        for combo in combinations(cands, r):
            if abs(det([coords[p] for p in combo])) == 1:
                return sorted((list(p) for p in combo), reverse=True)
    return None


# ---------------------------------------------------------------- exact LP feasibility

def lp_feasible(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Find ``x >= 0`` with ``A x = b`` (exact phase-one simplex, Bland's rule).

    Returns a feasible point or ``None``.
    """
    k = len(A)
    N = len(A[0]) if k else 0
    rows = []
    for i in range(k):
        r = [Fraction(v) for v in A[i]]
        bi = Fraction(b[i])
        if bi < 0:
            r, bi = [-v for v in r], -bi
        rows.append(r + [Fraction(int(j == i)) for j in range(k)] + [bi])
    total = N + k
    basis = [N + i for i in range(k)]
    obj = [Fraction(0)] * (total + 1)
    for r in rows:
        for j in range(N):
            obj[j] -= r[j]
        obj[-1] -= r[-1]
    while True:
        enter = next((j for j in range(total) if obj[j] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i, r in enumerate(rows):
            if r[enter] > 0:
                ratio = r[-1] / r[enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:  # cannot happen in phase one
            return None
        pr = rows[leave]
        inv = 1 / pr[enter]
        pr = [x * inv for x in pr]
        rows[leave] = pr
        for i, r in enumerate(rows):
            if i != leave and r[enter] != 0:
                f = r[enter]
                rows[i] = [x - f * y for x, y in zip(r, pr)]
        if obj[enter] != 0:
            f = obj[enter]
            obj = [x - f * y for x, y in zip(obj, pr)]
        basis[leave] = enter
    if obj[-1] != 0:
        return None
    x = [Fraction(0)] * N
    for i, bi in enumerate(basis):
        if bi < N:
            x[bi] = rows[i][-1]
    return x


def in_convex_hull(point: Sequence, pts: Sequence[Sequence]) -> bool:
    """Exact test of ``point in conv(pts)``."""
    if not pts:
        return False
    dim = len(point)
    A = [[p[i] for p in pts] for i in range(dim)] + [[1] * len(pts)]
    return lp_feasible(A, list(point) + [1]) is not None


# ---------------------------------------------------------------- fan matrices

def positively_spans(V: Sequence[Sequence[int]]) -> bool:
    """True iff the columns of ``V`` positively span the whole ambient space."""
    n, m = shape(V)
    if rank(V) < n:
        return False
    # some x >= 1 with V x = 0; substitute x = 1 + y
    rhs = [-sum(row) for row in V]
    return lp_feasible(V, rhs) is not None


def is_F_matrix(V: Sequence[Sequence[int]]) -> bool:
    """Fan-matrix test: full rank, complete positive span, no zero or parallel columns."""
    try:
        V = as_int_matrix(V)
    except InputError:
        return False
    cols = columns(V)
    if any(not any(c) for c in cols):
        return False
    prims = [tuple(primitive(c)) for c in cols]
    if len(set(prims)) != len(prims):
        return False
    return positively_spans(V)


def column_permutation(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[int] | None:
    """Return ``perm`` with column ``i`` of ``A`` equal to column ``perm[i]`` of ``B``.

    ``None`` when the two matrices are not equal up to a column permutation.
    Ties between repeated columns are resolved in ascending index order.
    """
    ca, cb = columns(A), columns(B)
    if len(ca) != len(cb) or sorted(ca) != sorted(cb):
        return None
    pool: dict[tuple, list[int]] = {}
    for j, c in enumerate(cb):
        pool.setdefault(c, []).append(j)
    return [pool[c].pop(0) for c in ca]


def sorted_columns(A: Sequence[Sequence]) -> list[list]:
    """Canonical form: columns sorted lexicographically."""
    return from_columns(sorted(columns(A)))

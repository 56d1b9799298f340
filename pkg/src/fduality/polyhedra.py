"""Exact rational polytopes: vertex/facet conversion, lattice points, polars,
Minkowski sums and facet-interior lattice counts."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from math import ceil, floor, lcm
from typing import Iterable, Sequence

from . import _kernels
from .errors import (
    DimensionMismatch,
    Empty,
    EmptyLattice,
    InputError,
    OriginNotInterior,
    Unbounded,
)
from .exact_linalg import (
    as_int_matrix,
    det,
    dot,
    from_columns,
    gcd_list,
    in_convex_hull,
    integer_kernel,
    positively_spans,
    primitive,
    rank,
    solve_square,
    transpose,
)

RatPoint = tuple[Fraction, ...]


def _frac_point(p: Iterable) -> RatPoint:
    return tuple(Fraction(x) for x in p)


def _int_normal(u: Sequence) -> tuple[int, ...]:
    """Scale a rational direction to a primitive integer vector (same direction)."""
    L = lcm(*[Fraction(x).denominator for x in u])
    ints = [int(Fraction(x) * L) for x in u]
    return tuple(primitive(ints))


@dataclass(frozen=True)
class HRep:
    """Constraints ``A[i] . x >= rhs[i]``; rows of ``A`` are inward normals."""

    A: tuple[tuple[int, ...], ...]
    rhs: tuple[Fraction, ...]

    @classmethod
    def make(cls, A, rhs) -> "HRep":
        A = as_int_matrix(A)
        if len(rhs) != len(A):
            raise DimensionMismatch("constraint count mismatch")
        return cls(tuple(tuple(r) for r in A), tuple(Fraction(x) for x in rhs))

    @property
    def dim(self) -> int:
        return len(self.A[0])

    def contains(self, x: Sequence) -> bool:
        return all(dot(a, x) >= r for a, r in zip(self.A, self.rhs))

    def scaled(self, k) -> "HRep":
        return HRep(self.A, tuple(r * k for r in self.rhs))


class RationalPolytope:
    """A bounded polytope given by its (irredundant) rational vertices.

    An H-representation is carried along when the polytope was built from
    one; otherwise it is derived from the vertices on demand (only for
    full-dimensional polytopes).
    """

    def __init__(self, vertices: Iterable[Sequence], hrep: HRep | None = None,
                 _trusted: bool = False):
        verts = sorted({_frac_point(v) for v in vertices})
        if not verts:
            raise Empty("a polytope needs at least one vertex")
        dims = {len(v) for v in verts}
        if len(dims) != 1:
            raise DimensionMismatch("vertices of different lengths")
        if not _trusted:
            verts = hull_vertices(verts)
        self.vertices: tuple[RatPoint, ...] = tuple(verts)
        self._hrep = hrep

    # -- basic data
    @property
    def dim(self) -> int:
        return len(self.vertices[0])

    @cached_property
    def affine_dim(self) -> int:
        v0 = self.vertices[0]
        diffs = [[a - b for a, b in zip(v, v0)] for v in self.vertices[1:]]
        return rank(diffs) if diffs else 0

    @property
    def is_full_dimensional(self) -> bool:
        return self.affine_dim == self.dim

    @property
    def is_lattice(self) -> bool:
        return all(x.denominator == 1 for v in self.vertices for x in v)

    def vertex_matrix(self) -> list[list[Fraction]]:
        """Vertices as columns."""
        return from_columns(self.vertices)

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalPolytope) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __repr__(self) -> str:
        vs = ", ".join("(" + ", ".join(str(x) for x in v) + ")" for v in self.vertices)
        return f"{type(self).__name__}([{vs}])"

    # -- H-representation
    @property
    def hrep(self) -> HRep:
        if self._hrep is None:
            self._hrep = facets_from_vertices(self.vertices)
        return self._hrep

    @cached_property
    def facets(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Irredundant facet inequalities ``(normal, rhs)`` with ``normal . x >= rhs``."""
        if not self.is_full_dimensional:
            raise InputError("facets requested for a lower-dimensional polytope")
        h = self.hrep
        out = set()
        for a, r in zip(h.A, h.rhs):
            tight = [v for v in self.vertices if dot(a, v) == r]
            if len(tight) >= self.dim:
                diffs = [[x - y for x, y in zip(v, tight[0])] for v in tight[1:]]
                if rank(diffs) == self.dim - 1:
                    g = gcd_list(a)
                    out.add((tuple(x // g for x in a), r / g))
        return sorted(out)

    def contains(self, x: Sequence) -> bool:
        if self.is_full_dimensional or self._hrep is not None:
            return self.hrep.contains(x)
        return in_convex_hull(x, self.vertices)

    # -- derived polytopes
    def scaled(self, k) -> "RationalPolytope":
        k = Fraction(k)
        h = self._hrep.scaled(k) if self._hrep is not None and k > 0 else None
        cls = LatticePolytope if k.denominator == 1 and self.is_lattice and k > 0 else RationalPolytope
        return _build(cls, [tuple(k * x for x in v) for v in self.vertices], h)

    @cached_property
    def _lattice_points(self) -> tuple[tuple[int, ...], ...]:
        return tuple(_lattice_points(self))

    def lattice_points(self) -> list[tuple[int, ...]]:
        return list(self._lattice_points)


class LatticePolytope(RationalPolytope):
    """A polytope with integral vertices."""

    def __init__(self, vertices, hrep: HRep | None = None, _trusted: bool = False):
        super().__init__(vertices, hrep, _trusted)
        if not self.is_lattice:
            raise InputError("lattice polytope with non-integral vertex")

    @property
    def lattice_vertices(self) -> list[tuple[int, ...]]:
        return [tuple(int(x) for x in v) for v in self.vertices]


def _build(cls, vertices, hrep):
    return cls(vertices, hrep, _trusted=True)


# ---------------------------------------------------------------- vertex / facet conversion

def hull_vertices(points: Sequence[Sequence]) -> list[RatPoint]:
    """Irredundant vertices of ``conv(points)``, lexicographically sorted."""
    pts = sorted({_frac_point(p) for p in points})
    if len(pts) <= 2:
        return pts
    pset = set(pts)
    dim = len(pts[0])
    # cheap elimination: midpoint of two other points along a coordinate axis
    cands = []
    for p in pts:
        inner = False
        for i in range(dim):
            up = p[:i] + (p[i] + 1,) + p[i + 1:]
            dn = p[:i] + (p[i] - 1,) + p[i + 1:]
            if up in pset and dn in pset:
                inner = True
                break
        if not inner:
            cands.append(p)
    out = []
    for p in cands:
        others = [q for q in cands if q != p]
        if not in_convex_hull(p, others):
            out.append(p)
    return out


def facets_from_vertices(vertices: Sequence[RatPoint]) -> HRep:
    """Facet inequalities of a full-dimensional polytope (n-subset enumeration)."""
    verts = [_frac_point(v) for v in vertices]
    n = len(verts[0])
    if len(verts) <= n:
        raise InputError("not full-dimensional")
    found: dict[tuple[int, ...], Fraction] = {}
    for sub in combinations(range(len(verts)), n):
        base = verts[sub[0]]
        diffs = [[x - y for x, y in zip(verts[i], base)] for i in sub[1:]]
        if n == 1:
            normal = (1,)
        else:
            L = lcm(*[x.denominator for row in diffs for x in row])
            K = integer_kernel([[int(x * L) for x in row] for row in diffs])
            if len(K) != 1:
                continue
            normal = tuple(K[0])
        r = dot(normal, base)
        vals = [dot(normal, v) for v in verts]
        if all(v >= r for v in vals):
            found[tuple(primitive(normal))] = r / gcd_list(normal)
        if all(v <= r for v in vals):
            neg = tuple(-x for x in primitive(normal))
            found[neg] = -r / gcd_list(normal)
    if not found:
        raise InputError("not full-dimensional")
    keys = sorted(found)
    return HRep(tuple(keys), tuple(found[k] for k in keys))


def vertices_from_hrep(h: HRep, cls=None) -> RationalPolytope:
    """Vertices of ``{x : A x >= rhs}`` by enumerating square subsystems."""
    n = h.dim
    At = transpose([list(r) for r in h.A])
    if not positively_spans(At):
        raise Unbounded("constraint normals do not positively span: recession cone is nontrivial")
    found = set()
    for sub in combinations(range(len(h.A)), n):
        M = [h.A[i] for i in sub]
        if det(M) == 0:
            continue
        x = tuple(solve_square(M, [h.rhs[i] for i in sub]))
        if x not in found and h.contains(x):
            found.add(x)
    if not found:
        raise Empty("infeasible constraint system")
    if cls is None:
        cls = LatticePolytope if all(c.denominator == 1 for v in found for c in v) else RationalPolytope
    return _build(cls, sorted(found), h)


def divisor_polytope(V: Sequence[Sequence[int]], a: Sequence, k=1) -> RationalPolytope:
    """``{m : V^T m >= -k a}``."""
    h = HRep.make(transpose(as_int_matrix(V)), [-k * Fraction(x) for x in a])
    return vertices_from_hrep(h)


# ---------------------------------------------------------------- lattice points

def _bounding_box(vertices) -> tuple[list[int], list[int]]:
    n = len(vertices[0])
    lo = [ceil(min(v[i] for v in vertices)) for i in range(n)]
    hi = [floor(max(v[i] for v in vertices)) for i in range(n)]
    return lo, hi


def _lattice_points(p: RationalPolytope, backend: str | None = None) -> list[tuple[int, ...]]:
    lo, hi = _bounding_box(p.vertices)
    if any(h < l for l, h in zip(lo, hi)):
        return []
    if p._hrep is None and not p.is_full_dimensional:
        return [x for x in product(*[range(l, h + 1) for l, h in zip(lo, hi)])
                if in_convex_hull(x, p.vertices)]
    h = p.hrep
    A = [list(r) for r in h.A]
    rhs = [ceil(r) for r in h.rhs]
    if _kernels.int64_safe(A, rhs, lo, hi):
        arr = _kernels.scan_box(A, rhs, lo, hi, backend=backend)
        return [tuple(int(x) for x in row) for row in arr]
    return [x for x in product(*[range(l, h_ + 1) for l, h_ in zip(lo, hi)])
            if all(dot(a, x) >= r for a, r in zip(A, rhs))]


def lattice_points(p: RationalPolytope) -> list[tuple[int, ...]]:
    """All integer points of ``p`` in lexicographic order."""
    return p.lattice_points()


def integer_part(p: RationalPolytope) -> LatticePolytope:
    """``conv`` of the lattice points of ``p``."""
    if p.is_lattice:
        if isinstance(p, LatticePolytope):
            return p
        return _build(LatticePolytope, p.vertices, p._hrep)
    pts = p.lattice_points()
    if not pts:
        raise EmptyLattice("polytope contains no lattice point")
    return _build(LatticePolytope, hull_vertices(pts), None)


def contains_origin_interior(p: RationalPolytope) -> bool:
    if not p.is_full_dimensional:
        return False
    return all(r < 0 for _, r in p.facets)


def polar(p: RationalPolytope) -> RationalPolytope:
    """``{n : <n, m> >= -1 for all m in p}``."""
    if not contains_origin_interior(p):
        raise OriginNotInterior("polar needs the origin in the interior")
    verts = [tuple(Fraction(x) / -r for x in a) for a, r in p.facets]
    rows, rhs = [], []
    for v in p.vertices:
        L = lcm(*[x.denominator for x in v])
        rows.append([int(x * L) for x in v])
        rhs.append(Fraction(-L))
    h = HRep.make(rows, rhs)
    cls = LatticePolytope if all(x.denominator == 1 for v in verts for x in v) else RationalPolytope
    return _build(cls, sorted(set(verts)), h)


def minkowski_sum(p: RationalPolytope, q: RationalPolytope) -> RationalPolytope:
    if p.dim != q.dim:
        raise DimensionMismatch("Minkowski sum of polytopes in different dimensions")
    pts = [tuple(x + y for x, y in zip(u, v)) for u in p.vertices for v in q.vertices]
    verts = hull_vertices(pts)
    cls = LatticePolytope if p.is_lattice and q.is_lattice else RationalPolytope
    return _build(cls, verts, None)


def convex_hull(polytopes: Sequence[RationalPolytope]) -> RationalPolytope:
    pts = [v for p in polytopes for v in p.vertices]
    verts = hull_vertices(pts)
    cls = LatticePolytope if all(x.denominator == 1 for v in verts for x in v) else RationalPolytope
    return _build(cls, verts, None)


def primitive_vertex_matrix(p: RationalPolytope, require_interior_origin: bool = True) -> list[list[int]]:
    """Fan matrix whose columns are the primitive generators of the vertices of ``p``.

    Duplicate directions are merged and columns are sorted lexicographically.
    With ``require_interior_origin=False`` a vertex at the origin is dropped.
    """
    if require_interior_origin and not contains_origin_interior(p):
        raise OriginNotInterior("origin is not an interior point")
    if not p.is_lattice:
        raise InputError("primitive vertex matrix needs a lattice polytope")
    cols = set()
    for v in p.vertices:
        iv = [int(x) for x in v]
        if any(iv):
            cols.add(tuple(primitive(iv)))
    return from_columns(sorted(cols))


def facet_interior_lattice_counts(p: RationalPolytope) -> list[int]:
    """For each facet, the number of lattice points in its relative interior."""
    pts = p.lattice_points()
    fs = p.facets
    counts = []
    for i, (a, r) in enumerate(fs):
        c = 0
        for x in pts:
            if dot(a, x) != r:
                continue
            if all(dot(b, x) > s for j, (b, s) in enumerate(fs) if j != i):
                c += 1
        counts.append(c)
    return counts


def interior_lattice_points(p: RationalPolytope) -> list[tuple[int, ...]]:
    return [x for x in p.lattice_points() if all(dot(a, x) > r for a, r in p.facets)]

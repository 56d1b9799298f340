"""Fan matrices of standard complete toric varieties."""
from __future__ import annotations

from typing import Sequence

from .errors import InputError


def projective_space(n: int) -> list[list[int]]:
    """Rays ``e_1, ..., e_n, -(e_1 + ... + e_n)``."""
    if n < 1:
        raise InputError("projective space needs n >= 1")
    return [[int(i == j) for j in range(n)] + [-1] for i in range(n)]


def hirzebruch(r: int) -> list[list[int]]:
    """Rays ``(1,0), (-1,r), (0,1), (0,-1)``; ``r = 0`` is ``P^1 x P^1``."""
    if r < 0:
        raise InputError("Hirzebruch index must be non-negative")
    return [[1, -1, 0, 0], [0, r, 1, -1]]


def weighted_projective(q: Sequence[int]) -> list[list[int]]:
    from .quotient_structure import reduce_weights, wps_fan_matrix

    q = [int(x) for x in q]
    if any(x < 1 for x in q):
        raise InputError("weights must be positive")
    if reduce_weights(q) != q:
        raise InputError("weights must be reduced")
    return wps_fan_matrix(q)


def product(*fans: Sequence[Sequence[int]]) -> list[list[int]]:
    """Block-diagonal fan matrix of a product of toric varieties."""
    widths = [len(F[0]) for F in fans]
    rows = []
    offset = 0
    total = sum(widths)
    for F, w in zip(fans, widths):
        for r in F:
            rows.append([0] * offset + list(r) + [0] * (total - offset - w))
        offset += w
    return rows

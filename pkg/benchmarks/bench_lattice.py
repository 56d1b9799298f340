"""Compare the numba and numpy lattice-point scan kernels.

Run with ``python3 benchmarks/bench_lattice.py``.  The numba timing excludes
compilation (one warm-up call first); the one-off start-up cost is reported
separately.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from fduality import _kernels
from fduality.polyhedra import divisor_polytope
from fduality.varieties import projective_space


def box_problem(n: int, d: int):
    """Scan data for the degree-d polytope of P^n: its lattice points are the degree-d monomials."""
    P = divisor_polytope(projective_space(n), [1] * n + [d - n])
    A = [[int(x) for x in row] for row, _ in P.facets]
    rhs = [int(r) for _, r in P.facets]
    lo = [int(np.floor(min(v[i] for v in P.vertices))) for i in range(n)]
    hi = [int(np.ceil(max(v[i] for v in P.vertices))) for i in range(n)]
    return A, rhs, lo, hi


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    cases = [(2, 30), (2, 200), (3, 20), (3, 60), (4, 12), (4, 30), (5, 12), (5, 20)]
    have_numba = _kernels.backend_name() == "numba"
    if have_numba:
        A, rhs, lo, hi = box_problem(2, 3)
        t = time.perf_counter()
        _kernels.scan_box(A, rhs, lo, hi, backend="numba")
        print(f"numba start-up (compile or cache load): {time.perf_counter() - t:.3f} s")
    else:
        print("numba unavailable or disabled; timing numpy only")
    print(f"{'n':>2} {'d':>4} {'box':>12} {'points':>10} {'numpy s':>9} {'numba s':>9} {'ratio':>6}")
    for n, d in cases:
        A, rhs, lo, hi = box_problem(n, d)
        box = int(np.prod([h - l + 1 for l, h in zip(lo, hi)]))
        pts = len(_kernels.scan_box(A, rhs, lo, hi, backend="numpy"))
        t_np = best_of(lambda: _kernels.scan_box(A, rhs, lo, hi, backend="numpy"), args.repeat)
        if have_numba:
            got = _kernels.scan_box(A, rhs, lo, hi, backend="numba")
            assert len(got) == pts, "backends disagree"
            t_nb = best_of(lambda: _kernels.scan_box(A, rhs, lo, hi, backend="numba"), args.repeat)
            print(f"{n:>2} {d:>4} {box:>12} {pts:>10} {t_np:>9.4f} {t_nb:>9.4f} {t_np / t_nb:>6.2f}")
        else:
            print(f"{n:>2} {d:>4} {box:>12} {pts:>10} {t_np:>9.4f} {'-':>9} {'-':>6}")


if __name__ == "__main__":
    main()

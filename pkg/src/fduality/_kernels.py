"""Lattice-point box scan kernels.

The scan enumerates integer points ``x`` in a box with ``A x >= rhs``.  A
numba-compiled kernel is used for boxes of at least ``NUMBA_MIN_BOX``
points when numba imports and the environment variable
``FDUALITY_DISABLE_NUMBA`` is unset or ``0``; otherwise a vectorised numpy
kernel runs.  Callers pass only int64-safe data (see
``int64_safe``); anything larger goes through the exact Python path in
``polyhedra``.
"""
from __future__ import annotations

import os
from itertools import product

import numpy as np

_INT64_LIMIT = 2 ** 62


def _numba_requested() -> bool:
    return os.environ.get("FDUALITY_DISABLE_NUMBA", "0") in ("", "0")


try:
    if not _numba_requested():
        raise ImportError
    from numba import njit
except ImportError:  # pragma: no cover - depends on environment
    njit = None


def int64_safe(A, rhs, lo, hi) -> bool:
    """True when every partial sum of the scan fits comfortably in int64."""
    box = max([abs(v) for v in lo] + [abs(v) for v in hi] + [1])
    coeff = max([abs(x) for row in A for x in row] + [1])
    bound = max([abs(r) for r in rhs] + [0])
    n = len(lo)
    return coeff * box * (n + 1) + bound < _INT64_LIMIT


_TAIL_ROWS = 1 << 20
NUMBA_MIN_BOX = 2_000_000


def _scan_numpy(A: np.ndarray, rhs: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    n = lo.shape[0]
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    # enumerate a prefix of coordinates in Python and vectorise the rest,
    # keeping the vectorised block near _TAIL_ROWS rows
    split = n - 1
    rows = int(hi[n - 1] - lo[n - 1] + 1)
    while split > 0 and rows * int(hi[split - 1] - lo[split - 1] + 1) <= _TAIL_ROWS:
        split -= 1
        rows *= int(hi[split] - lo[split] + 1)
    axes = [np.arange(lo[i], hi[i] + 1, dtype=np.int64) for i in range(split, n)]
    grids = np.meshgrid(*axes, indexing="ij")
    tail = np.stack([g.ravel() for g in grids], axis=1)
    partial = tail @ A[:, split:].T
    head_ranges = [range(int(lo[i]), int(hi[i]) + 1) for i in range(split)]
    out = []
    for head in product(*head_ranges):
        shift = A[:, :split] @ np.asarray(head, dtype=np.int64) if split else 0
        ok = np.all(partial + shift >= rhs, axis=1)
        if ok.any():
            sel = tail[ok]
            prefix = np.broadcast_to(np.asarray(head, dtype=np.int64), (sel.shape[0], split))
            out.append(np.concatenate([prefix, sel], axis=1))
    if not out:
        return np.zeros((0, n), dtype=np.int64)
    return np.concatenate(out, axis=0)


def _scan_loops(A, rhs, lo, hi, out, fill):
    n = lo.shape[0]
    k = A.shape[0]
    x = lo.copy()
    count = 0
    while True:
        ok = True
        for c in range(k):
            s = 0
            for i in range(n):
                s += A[c, i] * x[i]
            if s < rhs[c]:
                ok = False
                break
        if ok:
            if fill:
                for i in range(n):
                    out[count, i] = x[i]
            count += 1
        # odometer increment, last coordinate fastest
        i = n - 1
        while i >= 0:
            x[i] += 1
            if x[i] <= hi[i]:
                break
            x[i] = lo[i]
            i -= 1
        if i < 0:
            return count


if njit is not None:
    _scan_loops_jit = njit(cache=True)(_scan_loops)
else:
    _scan_loops_jit = None


def _scan_numba(A, rhs, lo, hi) -> np.ndarray:
    n = lo.shape[0]
    dummy = np.zeros((0, n), dtype=np.int64)
    count = _scan_loops_jit(A, rhs, lo, hi, dummy, False)
    out = np.zeros((count, n), dtype=np.int64)
    _scan_loops_jit(A, rhs, lo, hi, out, True)
    return out


def backend_name() -> str:
    return "numba" if _scan_loops_jit is not None else "numpy"


def scan_box(A, rhs, lo, hi, backend: str | None = None) -> np.ndarray:
    """All integer ``x`` with ``lo <= x <= hi`` and ``A x >= rhs``, lexicographically ordered."""
    A = np.asarray(A, dtype=np.int64).reshape(len(A), len(lo))
    rhs = np.asarray(rhs, dtype=np.int64)
    lo = np.asarray(lo, dtype=np.int64)
    hi = np.asarray(hi, dtype=np.int64)
    if np.any(hi < lo):
        return np.zeros((0, lo.shape[0]), dtype=np.int64)
    if backend is None:
        # numba start-up costs a fraction of a second, so small boxes stay on numpy
        volume = int(np.prod((hi - lo + 1).astype(object))) if lo.shape[0] else 1
        backend = backend_name() if volume >= NUMBA_MIN_BOX else "numpy"
    if backend == "numba":
        if _scan_loops_jit is None:
            raise RuntimeError("numba backend requested but unavailable")
        return _scan_numba(A, rhs, lo, hi)
    return _scan_numpy(A, rhs, lo, hi)

"""Exact combinatorial discrepancy by exhaustive enumeration.

``disc(A) = min over x in {-1,+1}^n of ||Ax||_inf``.  Since ``x`` and ``-x``
give the same value, ``x_0`` is pinned to ``+1`` and the remaining
``2^(n-1)`` sign patterns are walked in binary-reflected Gray code order.
Each step flips one sign and updates the row sums ``Ax`` in ``O(m)``.

Incremental float updates drift, so the walk resynchronises ``Ax`` from
scratch every 1024 steps and keeps every pattern within a tiny window of
the incumbent.  Those candidates are re-scored with
:func:`disc_value`, which makes the returned value bit-identical to a naive
enumeration that scores every pattern with ``A @ x``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numba
import numpy as np

from .linalg import as_matrix

__all__ = ["SignColoring", "disc_value", "disc_brute", "disc_naive", "gray_code_signs"]

DEFAULT_LIMIT = 26
_RESYNC = 1024
_WINDOW = 1e-9
_MAX_CANDIDATES = 256


@dataclass(frozen=True)
class SignColoring:
    signs: np.ndarray
    value: float

    def __post_init__(self):
        self.signs.setflags(write=False)


def _as_signs(x, n: int) -> np.ndarray:
    signs = np.asarray(x.signs if isinstance(x, SignColoring) else x, dtype=np.float64).ravel()
    if signs.size != n:
        raise ValueError(f"coloring has length {signs.size}, A has {n} columns")
    if not np.all(np.abs(signs) == 1.0):
        raise ValueError("coloring entries must be +1 or -1")
    return signs


def disc_value(A, x) -> float:
    """``||A x||_inf`` computed from scratch."""
    A = as_matrix(A)
    signs = _as_signs(x, A.shape[1])
    return float(np.max(np.abs(A @ signs)))


def gray_code_signs(n: int, index: int) -> np.ndarray:
    """Sign vector visited at step ``index`` of the walk (``x_0 = +1``)."""
    g = index ^ (index >> 1)
    signs = np.ones(n)
    for b in range(n - 1):
        if (g >> b) & 1:
            signs[b + 1] = -1.0
    return signs


@numba.njit(cache=True)
def _walk(A, window, atol, resync, max_candidates):
    m, n = A.shape
    x = np.ones(n)
    s = np.zeros(m)
    for i in range(m):
        acc = 0.0
        for j in range(n):
            acc += A[i, j]
        s[i] = acc
    best = 0.0
    for i in range(m):
        best = max(best, abs(s[i]))
    cands = np.empty(max_candidates, dtype=np.int64)
    cands[0] = 0
    ncand = 1
    total = 1 << (n - 1)
    for step in range(1, total):
        # bit that flips between Gray codes step-1 and step
        b = 0
        while not (step >> b) & 1:
            b += 1
        j = b + 1
        x[j] = -x[j]
        if step % resync == 0:
            for i in range(m):
                acc = 0.0
                for k in range(n):
                    acc += A[i, k] * x[k]
                s[i] = acc
        else:
            delta = 2.0 * x[j]
            for i in range(m):
                s[i] += delta * A[i, j]
        limit = best * (1.0 + window) + atol
        worst = 0.0
        for i in range(m):
            v = abs(s[i])
            if v > worst:
                worst = v
                if worst > limit:
                    break  # early abandon: cannot beat or tie the incumbent
        if worst > limit:
            continue
        if worst < best * (1.0 - window) - atol:
            best = worst
            ncand = 0
        elif worst < best:
            best = worst
        if ncand < max_candidates:
            cands[ncand] = step
            ncand += 1
    return cands[:ncand]


def disc_brute(A, limit_n: int = DEFAULT_LIMIT) -> SignColoring:
    """Globally optimal sign coloring by Gray-code enumeration.

    Raises ``ValueError`` when ``A`` has more than ``limit_n`` columns.
    Ties go to the pattern visited first.
    """
    A = as_matrix(A)
    n = A.shape[1]
    if n > limit_n:
        raise ValueError(f"n = {n} exceeds enumeration limit {limit_n}")
    atol = _WINDOW * 1e-3 * float(np.abs(A).sum(axis=1).max())
    cands = _walk(np.ascontiguousarray(A), _WINDOW, atol, _RESYNC, _MAX_CANDIDATES)
    best_signs, best_val = None, np.inf
    for step in cands:
        signs = gray_code_signs(n, int(step))
        val = disc_value(A, signs)
        if val < best_val:
            best_signs, best_val = signs, val
    return SignColoring(best_signs, best_val)


def disc_naive(A) -> SignColoring:
    """Reference enumeration over all ``2^n`` sign vectors, lexicographic order."""
    A = as_matrix(A)
    best_signs, best_val = None, np.inf
    for bits in product((1.0, -1.0), repeat=A.shape[1]):
        signs = np.array(bits)
        val = float(np.max(np.abs(A @ signs)))
        if val < best_val:
            best_signs, best_val = signs, val
    return SignColoring(best_signs, best_val)

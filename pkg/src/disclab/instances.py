"""Matrix families for experiments.

Generators that take ``scaled=True`` (and :func:`gen_gaussian_unit`) return
matrices whose columns all have Euclidean norm at most 1.
"""
from __future__ import annotations

import math

import numpy as np

__all__ = [
    "gen_gaussian_unit",
    "gen_beck_fiala",
    "gen_arithmetic_progressions",
    "arithmetic_progressions",
    "gen_tight",
    "max_column_norm",
]


def max_column_norm(A) -> float:
    return float(np.linalg.norm(np.asarray(A, dtype=np.float64), axis=0).max())


def gen_gaussian_unit(m: int, n: int, seed: int = 0) -> np.ndarray:
    """i.i.d. Gaussian ``m x n`` matrix with every column scaled to unit norm."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    A = np.random.default_rng(seed).standard_normal((m, n))
    return A / np.linalg.norm(A, axis=0)


def gen_beck_fiala(n_vertices: int, n_edges: int, t: int, seed: int = 0,
                   scaled: bool = False) -> np.ndarray:
    """Incidence matrix of a hypergraph with maximum degree ``t``.

    Rows are edges, columns are vertices.  Each vertex picks its edge set
    uniformly among all subsets of ``range(n_edges)`` of size at most ``t``
    (the size is drawn with probability proportional to ``C(n_edges, k)``).
    With ``scaled=True`` entries are ``1/sqrt(t)`` instead of 1, so columns
    have norm at most 1.
    """
    if t < 1 or n_vertices < 1 or n_edges < 1:
        raise ValueError("t, n_vertices and n_edges must be positive")
    if t > n_edges:
        raise ValueError(f"degree bound t = {t} exceeds the number of edges {n_edges}")
    rng = np.random.default_rng(seed)
    sizes = np.arange(t + 1)
    weights = np.array([math.comb(n_edges, int(k)) for k in sizes], dtype=float)
    weights /= weights.sum()
    H = np.zeros((n_edges, n_vertices))
    for v in range(n_vertices):
        k = rng.choice(sizes, p=weights)
        H[rng.choice(n_edges, size=k, replace=False), v] = 1.0
    if scaled:
        H /= math.sqrt(t)
    return H


def arithmetic_progressions(N: int, max_diff: int | None = None) -> list[tuple[int, ...]]:
    """All arithmetic progressions inside ``{1, ..., N}``.

    Singletons appear once; longer progressions have common difference at
    most ``max_diff`` (default ``floor(sqrt(N))``).  Ordered by difference,
    then start, then length.
    """
    if N < 1:
        raise ValueError("N must be positive")
    if max_diff is None:
        max_diff = math.isqrt(N)
    aps: list[tuple[int, ...]] = [(a,) for a in range(1, N + 1)]
    for d in range(1, max_diff + 1):
        for a in range(1, N + 1):
            for last in range(a + d, N + 1, d):
                aps.append(tuple(range(a, last + 1, d)))
    return aps


def gen_arithmetic_progressions(N: int, seed: int = 0, scaled: bool = False,
                                max_diff: int | None = None) -> np.ndarray:
    """Incidence matrix of :func:`arithmetic_progressions` (rows) over ``[N]`` (columns).

    The family is deterministic; ``seed`` is accepted for a uniform generator
    signature and ignored.  ``scaled=True`` divides column ``j`` by the square
    root of its degree, giving unit-norm columns.
    """
    aps = arithmetic_progressions(N, max_diff)
    H = np.zeros((len(aps), N))
    for i, ap in enumerate(aps):
        H[i, np.asarray(ap) - 1] = 1.0
    if scaled:
        H /= np.sqrt(H.sum(axis=0))
    return H


def gen_tight() -> np.ndarray:
    """The 1x1 matrix ``(1)``, whose vector discrepancy is exactly 1."""
    return np.ones((1, 1))

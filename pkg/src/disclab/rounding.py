"""Random hyperplane rounding of a vector coloring to a sign coloring.

This is a heuristic bridge from vector colorings to sign colorings; nothing
is claimed about the quality of the rounded value.
"""
from __future__ import annotations

import numpy as np

from .brute import SignColoring, disc_value
from .linalg import as_matrix

__all__ = ["round_hyperplane"]


def round_hyperplane(A, U, trials: int = 100, seed: int = 0) -> SignColoring:
    """Best of ``trials`` random hyperplane roundings of ``U``.

    Trial ``t`` draws a standard Gaussian ``g`` (one stream, drawn in trial
    order, so a run with more trials extends a run with fewer) and sets
    ``x_j = sign(<g, u_j>)`` with ``sign(0) = +1``.  The first trial attaining
    the smallest ``||Ax||_inf`` wins.
    """
    A = as_matrix(A)
    U = np.asarray(U, dtype=np.float64)
    if U.ndim != 2 or U.shape[1] != A.shape[1]:
        raise ValueError(f"U must have {A.shape[1]} columns, got shape {U.shape}")
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(trials):
        g = rng.standard_normal(U.shape[0])
        x = np.where(g @ U >= 0.0, 1.0, -1.0)
        val = disc_value(A, x)
        if best is None or val < best.value:
            best = SignColoring(x, val)
    return best

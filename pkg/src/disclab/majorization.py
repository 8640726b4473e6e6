"""Multiplicative majorization and the sum domination it implies.

For sorted positive sequences ``x`` and ``y``, prefix-product domination
(``x_1...x_k >= y_1...y_k`` for every ``k``) implies prefix-sum domination.
Products are compared in log space so sequences of a few hundred terms
neither overflow nor underflow.
"""
from __future__ import annotations

import math
from typing import Optional

import numpy as np

__all__ = [
    "as_positive_sorted",
    "product_majorizes",
    "sum_dominates",
    "powering_bounds",
    "min_scale_to_majorize",
    "random_majorizing_pair",
]

PRODUCT_RTOL = 1e-12
SUM_ATOL = 1e-12


def as_positive_sorted(values, name: str = "x") -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise ValueError(f"{name} must be strictly positive and finite")
    if np.any(np.diff(arr) > 0):
        raise ValueError(f"{name} must be non-increasing")
    return arr


def _pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = as_positive_sorted(x, "x")
    y = as_positive_sorted(y, "y")
    if x.size != y.size:
        raise ValueError(f"length mismatch: {x.size} != {y.size}")
    return x, y


def _first_failure(ok: np.ndarray) -> Optional[int]:
    bad = np.flatnonzero(~ok)
    return None if bad.size == 0 else int(bad[0]) + 1


def product_majorizes(x, y) -> tuple[bool, Optional[int]]:
    """Check ``x_1...x_k >= y_1...y_k`` for all ``k``.

    Returns ``(True, None)`` or ``(False, k)`` with the smallest violating
    ``k`` (1-based).  Each comparison allows a log-space slack of
    ``1e-12 * k``.
    """
    x, y = _pair(x, y)
    k = np.arange(1, x.size + 1)
    ok = np.cumsum(np.log(x)) >= np.cumsum(np.log(y)) - PRODUCT_RTOL * k
    bad = _first_failure(ok)
    return bad is None, bad


def sum_dominates(x, y) -> tuple[bool, Optional[int]]:
    """Check ``x_1 + ... + x_k >= y_1 + ... + y_k`` for all ``k``."""
    x, y = _pair(x, y)
    ok = np.cumsum(x) >= np.cumsum(y) - SUM_ATOL
    bad = _first_failure(ok)
    return bad is None, bad


def powering_bounds(x, y, L: int) -> tuple[float, float]:
    """Log-space form of ``(sum x)^L >= (sum y)^L / n!``.

    Returns ``(L*log(sum x), L*log(sum y) - log(n!))``; the first is never
    smaller than the second when ``x`` product-majorizes ``y``.
    """
    x, y = _pair(x, y)
    if int(L) != L or L < 1:
        raise ValueError("L must be a positive integer")
    ok, k = product_majorizes(x, y)
    if not ok:
        raise ValueError(f"x does not product-majorize y (fails at k={k})")
    n = x.size
    lhs = L * math.log(math.fsum(x))
    rhs = L * math.log(math.fsum(y)) - math.lgamma(n + 1)
    return lhs, rhs


def min_scale_to_majorize(x, y) -> float:
    """Smallest ``c`` with ``c*x`` product-majorizing ``y``, clamped below at 1.

    Equal to ``max_k (prod_{i<=k} y_i / prod_{i<=k} x_i)^(1/k)``.
    """
    x, y = _pair(x, y)
    k = np.arange(1, x.size + 1)
    gaps = (np.cumsum(np.log(y)) - np.cumsum(np.log(x))) / k
    return max(1.0, float(np.exp(gaps.max())))


def random_majorizing_pair(rng: np.random.Generator, n: int, spread: float = 1.0):
    """Draw ``(x, y)`` with ``x`` product-majorizing ``y``.

    ``y`` is sorted log-normal.  ``log x`` is ``log y`` plus increments whose
    prefix sums are non-negative, then sorted descending; sorting can only
    raise prefix sums, so the product condition survives.  Roughly a third of
    the prefix slacks are exactly zero, which keeps boundary-tight cases in
    the mix.
    """
    y = np.sort(np.exp(spread * rng.standard_normal(n)))[::-1]
    slack = rng.exponential(0.5, size=n) * (rng.random(n) > 0.33)
    steps = np.diff(np.concatenate([[0.0], slack]))
    x = np.sort(y * np.exp(steps))[::-1]
    return x, y

"""Upper bounds on vector discrepancy from a factorised SDP.

The squared vector discrepancy is the optimum of

    min D  s.t.  (A X A^T)_ii <= D,  X_jj = 1,  X PSD.

Writing ``X = U^T U`` with unit columns ``u_j`` makes the row values
``r_i = ||sum_j A_ij u_j||^2`` and turns the SDP into minimising
``max_i r_i`` over a product of spheres.  The max is smoothed with a
log-sum-exp at temperature ``mu`` and minimised by projected gradient
descent with renormalisation; ``mu`` is annealed geometrically.  When a
stage stalls at a rank-deficient point the solver checks second-order
optimality and, if it fails, steps along a negative-curvature direction
before continuing.  Each trial also tries the sign coloring read off the
top eigenvector of ``U^T U``, which settles near-integral optima exactly.
Any feasible
``U`` gives a valid upper bound, and the reported value is always the true
max of the row values, recomputed from the final ``U``.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .linalg import as_matrix

__all__ = [
    "SolverConfig",
    "PrimalSolution",
    "row_values",
    "objective_and_gradient",
    "feasibility_residual",
    "normalize_columns",
    "solve_vecdisc",
    "thread_count",
]


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for :func:`solve_vecdisc`.

    ``dim=None`` means full rank (``dim = n``), where every unit-diagonal PSD
    matrix is reachable.  ``mu`` starts at ``mu_initial`` and is multiplied by
    ``mu_decay`` each time a stage converges (or exhausts its share of
    ``max_iters``) until it reaches ``mu_final``.
    """

    dim: Optional[int] = None
    trials: int = 8
    max_iters: int = 5000
    step: float = 0.1
    mu_initial: float = 1.0
    mu_final: float = 1e-3
    mu_decay: float = 0.5
    tol: float = 1e-9
    seed: int = 0

    def __post_init__(self):
        if self.dim is not None and self.dim < 1:
            raise ValueError("dim must be positive")
        for name in ("trials", "max_iters"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if not (self.step > 0 and self.tol > 0 and self.mu_final > 0):
            raise ValueError("step, tol and mu_final must be positive")
        if not self.mu_final < self.mu_initial:
            raise ValueError("mu_final must be below mu_initial")
        if not 0 < self.mu_decay < 1:
            raise ValueError("mu_decay must lie in (0, 1)")

    def stages(self) -> list[float]:
        mus = []
        mu = self.mu_initial
        while mu > self.mu_final:
            mus.append(mu)
            mu *= self.mu_decay
        mus.append(self.mu_final)
        return mus


@dataclass
class PrimalSolution:
    """A feasible vector coloring and the bound it certifies.

    ``coloring`` is ``dim x n`` with unit columns.  ``value`` is the max of
    ``row_values`` and upper-bounds ``vecdisc(A)**2``.
    """

    coloring: np.ndarray
    value: float
    row_values: np.ndarray
    iterations: int
    seed: int
    converged: bool
    grad_norm: float
    trial: int = 0
    trial_values: list = field(default_factory=list)

    @property
    def bound(self) -> float:
        """Upper bound on ``vecdisc(A)`` itself."""
        return float(np.sqrt(self.value))


def thread_count() -> int:
    env = os.environ.get("DISCLAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def normalize_columns(U: np.ndarray) -> np.ndarray:
    norms = np.sqrt(np.sum(U * U, axis=0))
    norms[norms == 0.0] = 1.0
    return U / norms


def feasibility_residual(U) -> float:
    """``max_j | ||u_j||^2 - 1 |`` over the columns of ``U``."""
    U = np.asarray(U, dtype=np.float64)
    return float(np.max(np.abs(np.sum(U * U, axis=0) - 1.0)))


def row_values(A, U) -> np.ndarray:
    """``r_i = ||sum_j A_ij u_j||^2``, i.e. the diagonal of ``A U^T U A^T``."""
    A = np.asarray(A, dtype=np.float64)
    V = np.asarray(U, dtype=np.float64) @ A.T
    return np.sum(V * V, axis=0)


def objective_and_gradient(A, U, mu: float) -> tuple[float, np.ndarray]:
    """Smoothed max ``mu * log(sum_i exp(r_i / mu))`` and its Euclidean gradient.

    The gradient has the shape of ``U``; column ``j`` is
    ``2 * sum_i s_i A_ij v_i`` with ``s = softmax(r / mu)`` and
    ``v_i = sum_j A_ij u_j``.  Projection onto the sphere tangent spaces is
    left to the caller.
    """
    if mu <= 0:
        raise ValueError("mu must be positive")
    A = np.asarray(A, dtype=np.float64)
    V = U @ A.T
    r = np.sum(V * V, axis=0)
    top = r.max()
    e = np.exp((r - top) / mu)
    total = e.sum()
    f = top + mu * np.log(total)
    s = e / total
    grad = 2.0 * (V * s) @ A
    return float(f), grad


def _tangent(U: np.ndarray, G: np.ndarray) -> np.ndarray:
    return G - U * np.sum(U * G, axis=0)


_CURVATURE_TOL = 1e-9
_MAX_ESCAPES = 20


def _escape_direction(A: np.ndarray, U: np.ndarray, mu: float, tol: float):
    """Negative-curvature direction at a stalled rank-deficient point, or None.

    With ``C`` the gradient of the smoothed objective in ``X = U^T U`` and
    ``y_j = (X C)_jj``, the point is optimal for the smoothed convex problem
    iff ``S = C - Diag(y)`` is PSD.  Otherwise, for ``v`` the bottom
    eigenvector of ``S`` and ``e`` orthogonal to the rows of ``U``, moving
    along ``e v^T`` decreases the objective to second order.
    """
    V = U @ A.T
    r = np.sum(V * V, axis=0)
    s = np.exp((r - r.max()) / mu)
    s /= s.sum()
    C = (A.T * s) @ A
    y = np.sum(U * (U @ C), axis=0)
    S = C - np.diag(y)
    lam, vecs = np.linalg.eigh(S)
    if lam[0] >= -tol * (1.0 + np.abs(C).max()):
        return None
    left = np.linalg.svd(U, full_matrices=True)[0]
    return np.outer(left[:, -1], vecs[:, 0])


def _descend(A, U, f, G, mu, cfg: SolverConfig, cap: int):
    """Projected gradient at fixed ``mu``; returns (U, f, G, iters, stationary, gnorm)."""
    step = cfg.step
    gnorm = np.inf
    for it in range(1, cap + 1):
        T = _tangent(U, G)
        gnorm = float(np.linalg.norm(T))
        if gnorm == 0.0:
            return U, f, G, it, True, gnorm
        while True:
            U_new = normalize_columns(U - step * T)
            f_new, G_new = objective_and_gradient(A, U_new, mu)
            if f_new < f or step < 1e-14:
                break
            step *= 0.5
        if not f_new < f:
            # no descent even at a negligible step
            return U, f, G, it, True, gnorm
        decrease = f - f_new
        U, f, G = U_new, f_new, G_new
        step *= 1.25
        if decrease <= cfg.tol * (1.0 + abs(f)):
            return U, f, G, it, True, gnorm
    return U, f, G, cap, False, gnorm


def _rank_one_snap(A: np.ndarray, U: np.ndarray):
    """Sign coloring read off the top eigenvector of ``U^T U``, embedded as a vector coloring.

    Exact whenever the optimum is a sign vector and ``U`` is close to it.
    """
    X = U.T @ U
    v = np.linalg.eigh(X)[1][:, -1]
    x = np.where(v >= 0.0, 1.0, -1.0)
    S = np.zeros_like(U)
    S[0] = x
    return S, row_values(A, S)


def _run_trial(A: np.ndarray, cfg: SolverConfig, trial: int):
    n = A.shape[1]
    d = cfg.dim or n
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, trial]))
    U = normalize_columns(rng.standard_normal((d, n)))

    stages = cfg.stages()
    budget = max(1, cfg.max_iters // len(stages))
    iters = 0
    converged = False
    gnorm = np.inf
    for s_idx, mu in enumerate(stages):
        last = s_idx == len(stages) - 1
        f, G = objective_and_gradient(A, U, mu)
        stage_end = cfg.max_iters if last else min(iters + budget, cfg.max_iters)
        escapes = 0
        while True:
            U, f, G, used, stationary, gnorm = _descend(A, U, f, G, mu, cfg, stage_end - iters)
            iters += used
            if not stationary or iters >= stage_end or escapes >= _MAX_ESCAPES:
                break
            E = _escape_direction(A, U, mu, _CURVATURE_TOL)
            if E is None:
                break
            escapes += 1
            for eps in 0.5 ** np.arange(12):
                U_new = normalize_columns(U + eps * E)
                f_new, G_new = objective_and_gradient(A, U_new, mu)
                if f_new < f:
                    break
            else:
                break
            U, f, G = U_new, f_new, G_new
        if last:
            converged = stationary
        if iters >= cfg.max_iters:
            break
    U = normalize_columns(U)
    rv = row_values(A, U)
    S, srv = _rank_one_snap(A, U)
    if srv.max() < rv.max():
        U, rv = S, srv
    return U, rv, iters, converged, gnorm


def solve_vecdisc(A, cfg: SolverConfig = SolverConfig(), workers: Optional[int] = None) -> PrimalSolution:
    """Best-of-``cfg.trials`` feasible vector coloring for ``A``.

    Each trial uses its own RNG stream seeded by ``(cfg.seed, trial)``, so the
    result does not depend on ``workers``.  The winner is the trial with the
    smallest true max row value; ties go to the lower trial index.
    """
    A = as_matrix(A)
    if workers is None:
        workers = min(thread_count(), cfg.trials)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda t: _run_trial(A, cfg, t), range(cfg.trials)))
    else:
        results = [_run_trial(A, cfg, t) for t in range(cfg.trials)]

    values = [float(rv.max()) for _, rv, *_ in results]
    best = int(np.argmin(values))
    U, rv, iters, converged, gnorm = results[best]
    return PrimalSolution(
        coloring=U,
        value=float(rv.max()),
        row_values=rv,
        iterations=iters,
        seed=cfg.seed,
        converged=converged,
        grad_norm=gnorm,
        trial=best,
        trial_values=values,
    )

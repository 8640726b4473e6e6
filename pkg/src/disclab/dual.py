"""Dual certificates for vector discrepancy and the witnesses that refute them.

A pair ``(p, w)`` with ``p`` a distribution over the rows of ``A`` and

    A^T diag(p) A - diag(w)  PSD

proves ``vecdisc(A) >= sqrt(sum(w))``.  Geometrically, the ellipsoid
``{z : E_p (Az)_i^2 <= 1}`` sits inside ``{z : sum_j w_j z_j^2 <= 1}``.
When every column of ``A`` has norm at most 1, no such pair has
``sum(w) > 1``; :func:`extract_witness` produces the direction ``z`` that
breaks the containment, and :func:`theorem_trace` replays the determinant
and majorization chain behind that fact on a pair where containment holds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    as_matrix,
    eig_sym,
    hadamard_bound_check,
    logdet_psd,
    min_eigenvalue,
    orthonormal_range_basis,
)

__all__ = [
    "DualCertificate",
    "Witness",
    "ProofTrace",
    "WitnessNotFound",
    "ContainmentError",
    "gap_matrix",
    "verify_certificate",
    "certificate_min_eigenvalue",
    "extract_witness",
    "theorem_trace",
    "search_certificate",
]

PSD_TOL = 1e-8
WITNESS_RTOL = 1e-10
SUM_SLACK = 1e-6
COLUMN_NORM_SLACK = 1e-9


class WitnessNotFound(ArithmeticError):
    """No direction with a usable margin was found; the input is numerically degenerate."""

    def __init__(self, message: str, min_eigenvalue: float):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class ContainmentError(ValueError):
    """``A^T P A - W`` is not PSD, so the proof chain has no hypothesis to work from."""


@dataclass
class DualCertificate:
    p: np.ndarray
    w: np.ndarray
    D: float

    def __post_init__(self):
        self.p = np.asarray(self.p, dtype=np.float64).ravel()
        self.w = np.asarray(self.w, dtype=np.float64).ravel()
        self.D = float(self.D)
        if self.p.size == 0 or self.w.size == 0:
            raise ValueError("p and w must be non-empty")
        if not (np.all(np.isfinite(self.p)) and np.all(np.isfinite(self.w)) and math.isfinite(self.D)):
            raise ValueError("certificate entries must be finite")
        if np.any(self.p < 0):
            raise ValueError("p has negative entries")
        if abs(math.fsum(self.p) - 1.0) > 1e-12:
            raise ValueError(f"p sums to {math.fsum(self.p)!r}, not 1")
        if self.D < 0:
            raise ValueError("D must be non-negative")

    @property
    def weight(self) -> float:
        return math.fsum(self.w)

    @classmethod
    def trivial(cls, m: int, n: int) -> "DualCertificate":
        return cls(np.full(m, 1.0 / m), np.zeros(n), 0.0)


@dataclass
class Witness:
    """Direction ``z`` with ``E_p (Az)_i^2 = lhs < rhs = sum_j w_j z_j^2``."""

    z: np.ndarray
    lhs: float
    rhs: float

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs


@dataclass
class ProofTrace:
    """Per-prefix quantities of the determinant/majorization argument.

    Columns are reordered by decreasing positive ``w`` (``order`` holds the
    original indices) and ``p`` is sorted decreasingly, zero-padded past ``m``.
    All products are stored as natural logs.  ``slack`` absorbs a slightly
    negative minimum eigenvalue of ``A^T P A - W`` (see :func:`theorem_trace`).
    """

    order: np.ndarray
    w_sorted: np.ndarray
    p_sorted: np.ndarray
    log_dets: np.ndarray
    log_prefix_p: np.ndarray
    log_prefix_w: np.ndarray
    hadamard_dets: np.ndarray
    section_log_dets: np.ndarray
    eig_lb: np.ndarray
    eig_ub: np.ndarray
    prod_majorized: np.ndarray
    sum_p: float
    sum_w: float
    sum_bound_holds: bool
    min_eigenvalue: float
    slack: np.ndarray = field(repr=False)

    @property
    def all_flags(self) -> bool:
        return bool(np.all(self.eig_lb) and np.all(self.eig_ub) and np.all(self.prod_majorized))


def _check_dims(A: np.ndarray, p: np.ndarray, w: np.ndarray):
    m, n = A.shape
    if p.shape != (m,):
        raise ValueError(f"p has length {p.size}, expected {m} (rows of A)")
    if w.shape != (n,):
        raise ValueError(f"w has length {w.size}, expected {n} (columns of A)")


def gap_matrix(A, p, w) -> np.ndarray:
    """``A^T diag(p) A - diag(w)``."""
    A = as_matrix(A)
    p = np.asarray(p, dtype=np.float64).ravel()
    w = np.asarray(w, dtype=np.float64).ravel()
    _check_dims(A, p, w)
    G = (A.T * p) @ A
    G[np.diag_indices_from(G)] -= w
    return G


def certificate_min_eigenvalue(A, cert: DualCertificate, method: str = "jacobi") -> float:
    return min_eigenvalue(gap_matrix(A, cert.p, cert.w), method=method)[0]


def verify_certificate(A, cert: DualCertificate, tol: float = PSD_TOL) -> bool:
    """True iff ``A^T P A - W`` has min eigenvalue ``>= -tol`` and ``sum(w) >= D^2 - tol``.

    Uses the Jacobi eigensolver.  A true result certifies ``vecdisc(A) >= D``
    up to ``tol``.  Non-positive ``w_j`` are accepted as they are.
    """
    if tol < 0:
        raise ValueError("tol must be non-negative")
    lam = certificate_min_eigenvalue(A, cert)
    return lam >= -tol and cert.weight >= cert.D**2 - tol


def _witness_sides(A, p, w, z) -> tuple[float, float]:
    Az = A @ z
    return math.fsum(p * Az * Az), math.fsum(w * z * z)


def extract_witness(A, p, w) -> Witness:
    """Find ``z`` with ``E_{i~p} (Az)_i^2 < sum_j w_j z_j^2``.

    Requires columns of norm at most 1 and ``sum(w) > 1``.  Coordinates with
    ``w_j <= 0`` get ``z_j = 0``; on the rest, ``z`` is the bottom eigenvector
    of ``A^T P A - W``, whose eigenvalue is negative whenever the weights
    exceed 1.  If the margin is below ``1e-10 * rhs`` the two lowest
    eigenvectors and their equal-weight combinations are tried before giving
    up with :class:`WitnessNotFound`.
    """
    A = as_matrix(A)
    p = np.asarray(p, dtype=np.float64).ravel()
    w = np.asarray(w, dtype=np.float64).ravel()
    _check_dims(A, p, w)
    norms = np.linalg.norm(A, axis=0)
    if norms.max() > 1.0 + COLUMN_NORM_SLACK:
        raise ValueError(f"column norm {norms.max():.6g} exceeds 1")
    if not math.fsum(w) > 1.0 + SUM_SLACK:
        raise ValueError(f"sum(w) = {math.fsum(w):.9g} must exceed 1 by at least {SUM_SLACK:g}")

    keep = np.flatnonzero(w > 0)
    sub = gap_matrix(A[:, keep], p, w[keep])
    dec = eig_sym(sub)
    lam = float(dec.values[-1])

    candidates = [dec.vectors[:, -1]]
    if keep.size > 1:
        v1, v2 = dec.vectors[:, -1], dec.vectors[:, -2]
        candidates += [v2, (v1 + v2) / math.sqrt(2.0), (v1 - v2) / math.sqrt(2.0)]
    for v in candidates:
        z = np.zeros(A.shape[1])
        z[keep] = v
        lhs, rhs = _witness_sides(A, p, w, z)
        if rhs - lhs >= WITNESS_RTOL * rhs and rhs > 0:
            return Witness(z, lhs, rhs)
    raise WitnessNotFound(
        f"no witness with margin >= {WITNESS_RTOL:g}*rhs; min eigenvalue {lam:.3e}", lam
    )


def _sorted_desc(values: np.ndarray) -> np.ndarray:
    # ties keep ascending original index
    return np.argsort(-values, kind="stable")


def theorem_trace(A, p, w, psd_tol: float = PSD_TOL, rtol: float = 1e-9) -> ProofTrace:
    """Replay the argument bounding ``sum(w)`` on a pair where containment holds.

    With columns sorted by decreasing positive ``w`` and ``A_k`` the first
    ``k`` of them, each prefix records

    * ``eig_lb``: ``det(A_k^T P A_k) <= p_1...p_k`` (Hadamard plus interlacing),
    * ``eig_ub``: ``det(A_k^T P A_k) >= w_1...w_k`` (containment),
    * ``prod_majorized``: ``p_1...p_k >= w_1...w_k``,

    all in log space with relative slack ``rtol * k``.  If the minimum
    eigenvalue ``lam`` of ``A^T P A - W`` is slightly negative (allowed down to
    ``-psd_tol``), the lower bound is weakened to the product of
    ``w_j - |lam|`` and the same amount is granted to ``prod_majorized``, so
    ``eig_lb and eig_ub`` always implies ``prod_majorized``.

    Raises :class:`ContainmentError` if ``lam < -psd_tol`` and ``ValueError``
    for columns of norm above 1.  A failing final sum bound raises
    ``ArithmeticError``: it would contradict the bound ``sum(w) <= 1``.
    """
    A = as_matrix(A)
    p = np.asarray(p, dtype=np.float64).ravel()
    w = np.asarray(w, dtype=np.float64).ravel()
    _check_dims(A, p, w)
    if np.linalg.norm(A, axis=0).max() > 1.0 + COLUMN_NORM_SLACK:
        raise ValueError("columns of A must have norm at most 1")
    lam = min_eigenvalue(gap_matrix(A, p, w))[0]
    if lam < -psd_tol:
        raise ContainmentError(f"A^T P A - W has min eigenvalue {lam:.3e}; use extract_witness")
    shift = max(0.0, -lam)

    pos = np.flatnonzero(w > 0)
    order = pos[_sorted_desc(w[pos])]
    ws = w[order]
    Ak = A[:, order]
    n = ws.size
    ps = p[_sorted_desc(p)]
    ps_pad = np.concatenate([ps, np.zeros(max(0, n - ps.size))])[:n] if n else ps[:0]

    with np.errstate(divide="ignore"):
        log_pp = np.cumsum(np.log(ps_pad))
        log_pw = np.cumsum(np.log(ws))
        log_pw_shift = np.cumsum(np.log(np.clip(ws - shift, 0.0, None)))

    log_dets = np.empty(n)
    hadamard = np.full(n, np.nan)
    sections = np.full(n, np.nan)
    for k in range(1, n + 1):
        B = Ak[:, :k]
        log_dets[k - 1] = logdet_psd((B.T * p) @ B, tol=np.inf)
        Uk = orthonormal_range_basis(B)
        if Uk.shape[1] == k:
            hadamard[k - 1] = hadamard_bound_check(Uk.T @ B)[0]
            sections[k - 1] = logdet_psd((Uk.T * p) @ Uk, tol=np.inf)

    k = np.arange(1, n + 1)
    slack = rtol * k
    eig_lb = log_dets <= log_pp + slack
    eig_ub = log_dets >= log_pw_shift - slack
    prod_ok = log_pp >= log_pw_shift - 2 * slack
    sum_p = math.fsum(ps_pad)
    sum_w = math.fsum(ws)
    holds = sum_w <= sum_p + SUM_SLACK and sum_p <= 1.0 + SUM_SLACK
    trace = ProofTrace(
        order=order,
        w_sorted=ws,
        p_sorted=ps_pad,
        log_dets=log_dets,
        log_prefix_p=log_pp,
        log_prefix_w=log_pw,
        hadamard_dets=hadamard,
        section_log_dets=sections,
        eig_lb=eig_lb,
        eig_ub=eig_ub,
        prod_majorized=prod_ok,
        sum_p=sum_p,
        sum_w=sum_w,
        sum_bound_holds=holds,
        min_eigenvalue=lam,
        slack=slack,
    )
    if not holds:
        raise ArithmeticError(
            f"sum(w) = {sum_w!r} exceeds top-{n} sum(p) = {sum_p!r} under containment"
        )
    return trace


def _largest_feasible(lo: float, hi: float, feasible, steps: int) -> float:
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo


def search_certificate(A, iters: int = 50, seed: int = 0, lr: float = 0.1,
                       bisection_steps: int = 30) -> DualCertificate:
    """Heuristic search for a large verifiable dual certificate.

    Each outer round

    1. raises each ``w_j`` in turn by the largest increment that keeps
       ``A^T P A - W`` PSD (bisection on ``[0, (A^T P A)_jj - w_j + 1]``), then
    2. takes one multiplicative-weights step on ``p`` towards rows that raise
       the bottom eigenvalue, and scales ``w`` down if PSD-ness was lost.

    The best certificate seen is re-verified with :func:`verify_certificate`
    at ``tol = 1e-8`` and shrunk further if needed, so the result always
    verifies; the worst case is the trivial ``D = 0`` certificate.  ``seed``
    only fixes the round-robin starting column.
    """
    A = as_matrix(A)
    m, n = A.shape
    rng = np.random.default_rng(seed)
    start = int(rng.integers(n))
    cols = [(start + j) % n for j in range(n)]

    def lam_min(p, w):
        M = (A.T * p) @ A
        M[diag] -= w
        return np.linalg.eigvalsh(M)[0]

    diag = np.diag_indices(n)
    p = np.full(m, 1.0 / m)
    w = np.zeros(n)
    best_p, best_w = p.copy(), w.copy()
    for _ in range(iters):
        base = (A.T * p) @ A
        for j in cols:
            M = base.copy()
            M[diag] -= w

            def ok(delta):
                M[j, j] = base[j, j] - w[j] - delta
                return np.linalg.eigvalsh(M)[0] >= 0.0

            hi = base[j, j] - w[j] + 1.0
            w[j] += _largest_feasible(0.0, max(hi, 0.0), ok, bisection_steps)
        if math.fsum(w) > math.fsum(best_w):
            best_p, best_w = p.copy(), w.copy()

        M = base.copy()
        M[diag] -= w
        v = np.linalg.eigh(M)[1][:, 0]
        g = (A @ v) ** 2
        if g.max() > 0:
            p = p * np.exp(lr * g / g.max())
            p /= p.sum()
        if lam_min(p, w) < 0.0:
            scale = _largest_feasible(0.0, 1.0, lambda s: lam_min(p, s * w) >= 0.0, 50)
            w = scale * w

    cert = _shrink_until_valid(A, best_p, best_w)
    return cert


def _make(p: np.ndarray, w: np.ndarray) -> DualCertificate:
    p = p / math.fsum(p)
    return DualCertificate(p, w, math.sqrt(max(math.fsum(w), 0.0)))


def _shrink_until_valid(A: np.ndarray, p: np.ndarray, w: np.ndarray) -> DualCertificate:
    cert = _make(p, w)
    if verify_certificate(A, cert):
        return cert
    for s in 0.5 ** np.arange(1, 60):
        cert = _make(p, s * w)
        if verify_certificate(A, cert):
            return cert
    return DualCertificate.trivial(*A.shape)

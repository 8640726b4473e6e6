"""Dense linear-algebra kernels.

Everything here works on small dense ``float64`` arrays (n up to a few
hundred).  The symmetric eigensolver is a cyclic Jacobi iteration so the
results are deterministic and easy to audit; ``method="lapack"`` switches to
``numpy.linalg.eigh`` for hot loops that call it thousands of times.
"""
from __future__ import annotations

import numpy as np

__all__ = [
    "NumericalFailure",
    "EigenDecomposition",
    "as_matrix",
    "as_symmetric",
    "eig_sym",
    "min_eigenvalue",
    "is_psd",
    "det_psd",
    "logdet_psd",
    "orthonormal_range_basis",
    "hadamard_bound_check",
]

RANK_RTOL = 1e-10
PSD_TOL = 1e-8


class NumericalFailure(ArithmeticError):
    """An iterative kernel failed to reach its accuracy target."""


class EigenDecomposition:
    """Eigenvalues sorted descending, with matching orthonormal eigenvectors.

    ``vectors[:, k]`` is the eigenvector for ``values[k]``.
    """

    __slots__ = ("values", "vectors")

    def __init__(self, values: np.ndarray, vectors: np.ndarray):
        self.values = values
        self.vectors = vectors
        self.values.setflags(write=False)
        self.vectors.setflags(write=False)

    def __iter__(self):
        yield self.values
        yield self.vectors

    def __repr__(self) -> str:
        return f"EigenDecomposition(values={self.values!r})"


def as_matrix(A, name: str = "A") -> np.ndarray:
    """Return ``A`` as a finite 2-D float64 array with at least one row and column."""
    arr = np.array(A, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must have at least one row and one column")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def as_symmetric(M, name: str = "M") -> np.ndarray:
    """Square finite matrix, stored canonically from its upper triangle."""
    arr = as_matrix(M, name)
    if arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be square, got shape {arr.shape}")
    upper = np.triu(arr)
    return upper + np.triu(arr, 1).T


def _jacobi(a: np.ndarray, max_sweeps: int) -> tuple[np.ndarray, np.ndarray]:
    n = a.shape[0]
    v = np.eye(n)
    scale = max(np.abs(a).max(), np.finfo(float).tiny)
    iu = np.triu_indices(n, 1)
    for sweep in range(max_sweeps):
        off = np.sqrt(np.sum(a[iu] ** 2))
        if off <= 1e-17 * scale * n:
            return np.diag(a).copy(), v
        # threshold sweeps: skip small rotations early on
        thresh = 0.2 * off / n**2 if sweep < 3 else 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0 or abs(apq) <= thresh:
                    continue
                app, aqq = a[p, p], a[q, q]
                if sweep > 3 and abs(apq) < 1e-18 * max(abs(app), abs(aqq), scale):
                    a[p, q] = a[q, p] = 0.0
                    continue
                h = aqq - app
                if abs(h) + 100.0 * abs(apq) == abs(h):
                    # theta**2 would overflow; t ~ 1/(2 theta)
                    t = apq / h
                else:
                    theta = h / (2.0 * apq)
                    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                colp = a[:, p].copy()
                colq = a[:, q]
                a[:, p] = c * colp - s * colq
                a[:, q] = s * colp + c * colq
                rowp = a[p, :].copy()
                rowq = a[q, :]
                a[p, :] = c * rowp - s * rowq
                a[q, :] = s * rowp + c * rowq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    off = np.sqrt(np.sum(a[iu] ** 2))
    raise NumericalFailure(
        f"Jacobi did not converge in {max_sweeps} sweeps; off-diagonal residual {off:.3e}"
    )


def _canonical_signs(vectors: np.ndarray) -> np.ndarray:
    # first entry of non-negligible magnitude is made positive
    idx = np.argmax(np.abs(vectors) > 1e-12, axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def eig_sym(M, method: str = "jacobi", max_sweeps: int = 100) -> EigenDecomposition:
    """Eigendecomposition of a symmetric matrix, eigenvalues descending.

    Parameters
    ----------
    M : array_like, shape (n, n)
        Symmetric matrix.  Only the upper triangle is read.
    method : {"jacobi", "lapack"}
        ``"jacobi"`` runs cyclic Jacobi with threshold sweeps.  ``"lapack"``
        defers to :func:`numpy.linalg.eigh`.
    max_sweeps : int
        Sweep cap for Jacobi; exceeding it raises :class:`NumericalFailure`.

    Returns
    -------
    EigenDecomposition
        Ties in the eigenvalues keep the solver's column order.  Each
        eigenvector is sign-normalised so its first non-negligible entry is
        positive.
    """
    a = as_symmetric(M)
    if method == "jacobi":
        vals, vecs = _jacobi(a.copy(), max_sweeps)
    elif method == "lapack":
        vals, vecs = np.linalg.eigh(a)
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    order = np.argsort(-vals, kind="stable")
    return EigenDecomposition(vals[order].copy(), _canonical_signs(vecs[:, order]))


def min_eigenvalue(M, method: str = "jacobi") -> tuple[float, np.ndarray]:
    """Smallest eigenvalue of a symmetric matrix and a unit eigenvector for it."""
    dec = eig_sym(M, method=method)
    return float(dec.values[-1]), dec.vectors[:, -1].copy()


def is_psd(M, tol: float = 0.0, method: str = "jacobi") -> bool:
    if tol < 0:
        raise ValueError("tol must be non-negative")
    return min_eigenvalue(M, method=method)[0] >= -tol


def _psd_values(M, tol: float, method: str) -> np.ndarray:
    vals = eig_sym(M, method=method).values
    if vals[-1] < -tol:
        raise ValueError(f"matrix is not PSD: min eigenvalue {vals[-1]:.3e} < -{tol:g}")
    return np.clip(vals, 0.0, None)


def det_psd(M, tol: float = PSD_TOL, method: str = "jacobi") -> float:
    """Determinant of a PSD matrix as the product of its clamped eigenvalues.

    Clamping at zero keeps the result non-negative under roundoff.  Inputs
    whose smallest eigenvalue is below ``-tol`` are rejected.
    """
    return float(np.prod(_psd_values(M, tol, method)))


def logdet_psd(M, tol: float = PSD_TOL, method: str = "jacobi") -> float:
    """Natural log of :func:`det_psd`; ``-inf`` for singular input."""
    vals = _psd_values(M, tol, method)
    if np.any(vals == 0.0):
        return -np.inf
    return float(np.sum(np.log(vals)))


def orthonormal_range_basis(A, rtol: float = RANK_RTOL) -> np.ndarray:
    """Orthonormal basis of ``range(A)`` by modified Gram-Schmidt.

    Every column is orthogonalised twice against the basis built so far.  A
    column whose remaining norm is at most ``rtol`` times the largest singular
    value of ``A`` is treated as dependent and dropped.

    Returns
    -------
    ndarray, shape (m, r)
        ``r`` is the numerical rank; ``r == 0`` for the zero matrix.
    """
    A = as_matrix(A)
    m, n = A.shape
    gram = A.T @ A if n <= m else A @ A.T
    sigma_max = np.sqrt(max(eig_sym(gram).values[0], 0.0))
    cutoff = rtol * sigma_max
    basis: list[np.ndarray] = []
    for j in range(n):
        v = A[:, j].copy()
        for _ in range(2):
            for q in basis:
                v -= (q @ v) * q
        norm = np.linalg.norm(v)
        if norm > cutoff and norm > 0.0:
            basis.append(v / norm)
    if not basis:
        return np.zeros((m, 0))
    return np.column_stack(basis)


def hadamard_bound_check(B) -> tuple[float, bool]:
    """Return ``(|det B|, |det B| <= prod of column norms + 1e-9)``.

    ``|det B|`` is computed as ``sqrt(det(B^T B))`` so it goes through the
    same eigenvalue path as :func:`det_psd`.
    """
    B = as_matrix(B, "B")
    if B.shape[0] != B.shape[1]:
        raise ValueError(f"B must be square, got shape {B.shape}")
    d = float(np.sqrt(det_psd(B.T @ B, tol=np.inf)))
    bound = float(np.prod(np.linalg.norm(B, axis=0)))
    return d, d <= bound + 1e-9

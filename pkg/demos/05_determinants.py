"""The determinant facts used by the certificate argument.

  * A square matrix has |det| at most the product of its column norms.
  * For PSD X and orthonormal U with k columns, det(U^T X U) is at most the
    product of the k largest eigenvalues of X (interlacing).
  * Shrinking a PSD matrix while staying PSD cannot raise its determinant.

All determinants go through the package's own symmetric eigensolver.

Run:  python demos/05_determinants.py
"""
import numpy as np

from disclab.linalg import det_psd, eig_sym, hadamard_bound_check

rng = np.random.default_rng(2)

B = rng.standard_normal((5, 5))
d, ok = hadamard_bound_check(B)
print(f"|det B| = {d:.4f} <= product of column norms {np.prod(np.linalg.norm(B, axis=0)):.4f}: {ok}")

G = rng.standard_normal((8, 8))
X = G.T @ G / 8
lam = eig_sym(X).values
print("\nk   det(U^T X U)   top-k product")
for k in range(1, 6):
    U = np.linalg.qr(rng.standard_normal((8, k)))[0]
    print(f"{k}   {det_psd(U.T @ X @ U):12.5f}   {np.prod(lam[:k]):13.5f}")

# Y = X - t c c^T stays PSD up to t = 1 / (c^T X^{-1} c), where it turns singular.
c = rng.standard_normal(8)
t_max = 1.0 / (c @ np.linalg.solve(X, c))
print("\nfraction of t_max    det(Y)")
for frac in (0.0, 0.5, 0.9, 1.0):
    Y = X - frac * t_max * np.outer(c, c)
    print(f"{frac:17.1f}    {det_psd(Y, tol=1e-10):.6f}")

"""Lower bounds through dual certificates, and refuting impossible ones.

A certificate (p, w, D) consists of a probability vector p over rows and
weights w over columns with A^T diag(p) A - diag(w) PSD and sum(w) >= D^2.
Any such certificate proves that no vector coloring beats D.  For unit
columns no valid certificate can have sum(w) > 1; when someone claims one,
extract_witness produces a vector z exposing the failure.

Run:  python demos/02_dual_certificates.py
"""
import numpy as np

from disclab import (
    DualCertificate,
    extract_witness,
    gen_gaussian_unit,
    search_certificate,
    solve_vecdisc,
    verify_certificate,
)
from disclab.dual import certificate_min_eigenvalue

# Identity: the uniform p with w_j = 1/n makes the gap matrix exactly zero,
# so the certificate proves vector discrepancy 1 and the primal matches.
cert = search_certificate(np.eye(4))
print(f"I_4: D = {cert.D:.6f}, verified = {verify_certificate(np.eye(4), cert)}")

# A random instance: the primal gives an upper bound, the search a lower bound.
# The search is a simple coordinate-ascent heuristic, so the bracket can be
# wide; what matters is that every certificate it returns verifies.
A = gen_gaussian_unit(6, 6, seed=3)
upper = solve_vecdisc(A).bound
cert = search_certificate(A, iters=30)
print(f"6x6 Gaussian: {cert.D:.4f} <= vecdisc <= {upper:.4f}")
print(f"  min eigenvalue of the gap matrix: {certificate_min_eigenvalue(A, cert):.2e}")

# Now claim too much: rescale the weights so they sum to 1.1.  The claim
# cannot verify, and the witness shows why: sum_i p_i <a_i, z>^2 falls
# short of sum_j w_j z_j^2.
w = np.abs(cert.w) + 1e-3
w *= 1.1 / w.sum()
bogus = DualCertificate(cert.p, w, np.sqrt(1.1))
print(f"\noverweight claim verifies: {verify_certificate(A, bogus)}")
wit = extract_witness(A, bogus.p, bogus.w)
print(f"witness z = {np.round(wit.z, 3)}")
print(f"  lhs {wit.lhs:.6f} < rhs {wit.rhs:.6f}  (margin {wit.margin:.2e})")

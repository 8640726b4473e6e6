"""Following the determinant argument step by step.

Why can sum(w) never exceed 1 when A^T P A - W is PSD and the columns of A
have unit length?  Sort the positive weights w_1 >= w_2 >= ... and the row
weights p_1 >= p_2 >= ...  For each k, with A_k the first k selected columns:

    w_1 ... w_k  <=  det(A_k^T P A_k)  <=  p_1 ... p_k

The left inequality comes from the PSD containment, the right one from
bounding the determinant of a section of P by its top eigenvalues (the unit
columns cost nothing by the column-norm bound on determinants).  Products
dominating prefix by prefix then force sum(w) <= sum(p) = 1.
theorem_trace evaluates all of these quantities.

Run:  python demos/03_proof_trace.py
"""
import numpy as np

from disclab import gen_gaussian_unit, theorem_trace

rng = np.random.default_rng(0)
A = gen_gaussian_unit(7, 5, seed=11)
p = rng.dirichlet(np.ones(7))

# Largest multiple of a random positive profile d that stays contained.
M = (A.T * p) @ A
d = rng.uniform(0.2, 1.0, size=5)
beta = np.linalg.eigvalsh(M / np.sqrt(np.outer(d, d)))[0]
w = beta * d

tr = theorem_trace(A, p, w)
print(" k   log prod w   log det   log prod p   flags")
for k in range(len(tr.order)):
    flags = "".join("y" if f[k] else "n" for f in (tr.eig_ub, tr.eig_lb, tr.prod_majorized))
    print(f"{k + 1:2d} {tr.log_prefix_w[k]:11.4f} {tr.log_dets[k]:9.4f} {tr.log_prefix_p[k]:12.4f}   {flags}")
print(f"\nsum w = {tr.sum_w:.6f} <= sum p = {tr.sum_p:.6f}: {tr.sum_bound_holds}")
print("column-section determinants (each at most 1):", np.round(tr.hadamard_dets, 4))

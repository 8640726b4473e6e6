"""Combinatorial discrepancy of hypergraphs.

Color the vertices of a hypergraph red/blue so that every edge is as balanced
as possible.  When every vertex lies in at most t edges, a classical
argument guarantees imbalance at most 2t - 1; scaling the incidence matrix by
1/sqrt(t) gives unit-length columns, so the vector relaxation is at most 1.
Arithmetic progressions in {1..N} form a second classical family.

Run:  python demos/06_hypergraphs.py
"""
import math

from disclab import disc_brute, gen_arithmetic_progressions, gen_beck_fiala, solve_vecdisc
from disclab.sdp import SolverConfig

print(" t  vertices  edges  disc  2t-1  sqrt(t)*vector bound")
for t, n, m in [(2, 10, 8), (3, 12, 8), (4, 14, 10)]:
    H = gen_beck_fiala(n, m, t, seed=t)
    exact = disc_brute(H).value
    vec = solve_vecdisc(H / math.sqrt(t), SolverConfig(trials=4)).bound * math.sqrt(t)
    print(f"{t:2d}  {n:8d}  {m:5d}  {exact:4.0f}  {2 * t - 1:4d}  {vec:8.4f}")

print("\nN   progressions  disc")
for N in (4, 8, 12, 16):
    H = gen_arithmetic_progressions(N)
    res = disc_brute(H)
    coloring = "".join("+" if s > 0 else "-" for s in res.signs)
    print(f"{N:<3} {H.shape[0]:12d}  {res.value:4.0f}   {coloring}")

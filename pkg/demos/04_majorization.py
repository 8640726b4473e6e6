"""Products that dominate prefix by prefix also dominate in sum.

If x and y are positive and sorted descending, and every prefix product of x
is at least the matching prefix product of y, then sum(x) >= sum(y).  This
script checks the statement on random pairs and shows the counting bounds
behind one proof: expanding (sum x)^L and (sum y)^L into monomials.

Run:  python demos/04_majorization.py
"""
import numpy as np

from disclab.majorization import (
    min_scale_to_majorize,
    powering_bounds,
    product_majorizes,
    random_majorizing_pair,
    sum_dominates,
)

rng = np.random.default_rng(1)
ok = 0
for _ in range(500):
    x, y = random_majorizing_pair(rng, int(rng.integers(2, 40)))
    assert product_majorizes(x, y)[0]
    ok += sum_dominates(x, y)[0]
print(f"sum domination held on {ok}/500 product-majorizing pairs")

# The powering bounds: L log(sum x) stays above L log(sum y) - log(n!).
# Dividing by L and letting L grow squeezes out the n! factor.
x, y = random_majorizing_pair(rng, 6)
for L in (1, 10, 100, 1000):
    lhs, rhs = powering_bounds(x, y, L)
    print(f"L={L:5d}: log sum x = {lhs / L:.5f} >= {rhs / L:.5f}")
print(f"        log sum y = {np.log(y.sum()):.5f}")

# Without majorization the conclusion can fail; scaling x by the smallest
# factor that restores prefix-product domination fixes it.
x = np.array([3.0, 1.0])
y = np.array([2.0, 2.0])
print(f"\n(3,1) vs (2,2): {product_majorizes(x, y)}, scale needed {min_scale_to_majorize(x, y):.4f}")

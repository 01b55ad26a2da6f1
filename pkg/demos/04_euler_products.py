"""
Euler factors and truncated products
====================================
"""

import numpy as np

from boxzeta.counting import count_surface_fast
from boxzeta.lfunc import aggregate_factor, dirichlet_coeffs, evaluate_partial, preset, reciprocal_roots

sbar = preset("sbar")
print("degree", sbar.degree, "| with exceptional curves:", preset("s-paper").degree)

f = aggregate_factor(sbar, 3)
print("P_3(T) =", f.coeffs[:6], "...")

roots = reciprocal_roots(sbar, 7)
print("|alpha| / 7:", np.unique(np.round(np.abs(roots) / 7, 12)))

# the p-th Dirichlet coefficient is the Frobenius trace on H^2
d = dirichlet_coeffs(sbar, 31)
for p in (3, 5, 7, 11, 13):
    print(p, d[p - 1], count_surface_fast(p).count - p * p - 1)

for pmax in (11, 31, 97, 499):
    v = evaluate_partial(sbar, 4.0, pmax)
    print(f"s=4 pmax={pmax:4d}  value={v.value:.10f}  tail<={v.tail_bound:.2e}")

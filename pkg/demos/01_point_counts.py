"""
Counting points on the cuboid surface and on X(8)
=================================================

The surface lives in P^6 and is cut out by four quadrics; counting it by
brute force costs p^7.  The fast kernel only needs the number of square
roots of s and s - a_i^2, so it runs in p^3.
"""

import time

from boxzeta.counting import (count_curve_X, count_curve_X_brute, count_singular,
                              count_surface_brute, count_surface_fast)
from boxzeta.ffield import odd_primes

# brute force and the fast kernel agree on small primes
for p in (3, 5, 7, 11):
    t0 = time.perf_counter()
    brute = count_surface_brute(p).count
    t1 = time.perf_counter()
    fast = count_surface_fast(p).count
    t2 = time.perf_counter()
    print(f"p={p:2d}  brute={brute:5d} ({t1 - t0:.3f}s)  fast={fast:5d} ({t2 - t1:.5f}s)")

# every singular point reduces to a point of the surface; sqrt(-1) decides
# whether the 24 non-rational ones are visible over F_p
for p in odd_primes(30):
    print(p, count_surface_fast(p).count, count_singular(p))

# the canonical curve u^2 = 2xy, v^2 = x^2 - y^2, w^2 = x^2 + y^2
for p in (3, 5, 7):
    print("X", p, count_curve_X(p).count, count_curve_X_brute(p).count,
          "over F_p^2:", count_curve_X(p, 2).count)

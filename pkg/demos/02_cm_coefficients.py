"""
CM newform coefficients
=======================

f32 and f64 come from p = a^2 + b^2, the weight-3 forms h8/h32 from
p = a^2 + 2b^2.  The g64 pair is recovered from #X(F_p) and #X(F_{p^2})
after the f32 and f64 parts of H^1 are removed.
"""

from boxzeta.cmforms import (EXCLUDED, ap, ap_oracle_elliptic, coefficient, eta_oracle_h16,
                             extract_g_pair, qexp)
from boxzeta.ffield import odd_primes

print("f32:", [(n, c) for n, c in enumerate(qexp("f32", 25), start=1) if c is not EXCLUDED])
for p in odd_primes(40):
    print(f"p={p:2d}  f32={ap('f32', p):4d} (E32 count: {ap_oracle_elliptic('f32', p):4d})"
          f"  f64={ap('f64', p):4d}  g={extract_g_pair(p)!r:12s}"
          f"  h8={ap('h8', p):4d}  h16={ap('h16', p):5d}  h32={ap('h32', p):4d}")

# h16 against the eta product eta(4z)^6
eta = eta_oracle_h16(60)
print([(n, coefficient("h16", n), int(eta[n])) for n in range(1, 61, 4)])

# a_p(f)^2 = a_p(h16) + 2p only holds where p splits in Q(i)
for p in (5, 13, 3, 7):
    print(p, ap("f32", p) ** 2, ap("h16", p) + 2 * p, ap("h16", p, "minus2p") + 2 * p)

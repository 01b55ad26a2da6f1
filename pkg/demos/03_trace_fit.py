"""
Fitting the decomposition of H^2
================================

#S(F_p) - p^2 - 1 is a combination of seven Frobenius traces.  Solving the
integer system over the primes up to 50 gives the multiplicities; the
remaining primes up to 97 are a held-out check.
"""

from boxzeta.exactla import RankDeficient
from boxzeta.ffield import odd_primes
from boxzeta.tracefit import (InadmissibleSolution, fit_multiplicities, picard_report,
                              verify_identity)

m = fit_multiplicities(odd_primes(50))
print("multiplicities", m.as_tuple(), "rank", m.rank)

report = verify_identity(97, m)
print("all residuals zero:", report.success)

# too few primes = 1 mod 8 and the h8/h32 columns cannot be separated
try:
    fit_multiplicities(odd_primes(31))
except RankDeficient as exc:
    print("primes <= 31:", exc)

# the other reading of a_p(h16) at p = 3 mod 4 pushes a negative entry
try:
    fit_multiplicities(odd_primes(50), "minus2p")
except InadmissibleSolution as exc:
    print("minus2p:", exc.solution)

for hyp, rep in picard_report(m).items():
    print(hyp, rep["split"], rep["total"])

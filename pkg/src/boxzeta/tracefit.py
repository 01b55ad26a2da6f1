"""Lefschetz trace identity for the cuboid surface.

    #S(F_p) = p^2 + 1 + tr(Frob_p | H^2)

with H^2 decomposed into seven motive types.  Their Frobenius traces:

    h16, h32, h8                a_p of the weight-3 CM newforms
    Q(-1)                       p
    chi(-1) Q(-1)  for chi in {chi_{-4}, chi_{-8}, chi_8}     chi(p) p

``verify_identity`` checks a given multiplicity vector prime by prime;
``fit_multiplicities`` re-derives it from point counts by exact linear
algebra.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

from .cmforms import FormId, ap
from .counting import count_surface_fast, model_resolved_count
from .exactla import FitError, Inconsistent, RankDeficient, matrix_rank, solve_exact
from .ffield import check_odd_prime, chi_8, chi_m4, chi_m8, odd_primes

BASIS_NAMES = ("h16", "h32", "h8", "trivial", "chi_m4", "chi_m8", "chi_8")
N_EXCEPTIONAL = 48
H2_RANK = 30
PICARD_RANK = 64
HYPOTHESES = ("paper", "permutation")


class NonIntegral(Inconsistent):
    pass


class InadmissibleSolution(FitError):
    """Exact solution exists but violates non-negativity or the rank sum."""

    def __init__(self, message: str, solution: tuple):
        super().__init__(message)
        self.solution = solution


@dataclass(frozen=True)
class MultiplicityVector:
    h16: int
    h32: int
    h8: int
    trivial: int
    chi_m4: int
    chi_m8: int
    chi_8: int

    @classmethod
    def of(cls, values: Iterable[int]) -> "MultiplicityVector":
        return cls(*(int(v) for v in values))

    def as_tuple(self) -> tuple[int, ...]:
        return (self.h16, self.h32, self.h8, self.trivial, self.chi_m4, self.chi_m8, self.chi_8)

    def __iter__(self):
        return iter(self.as_tuple())

    @property
    def rank(self) -> int:
        """Dimension of the H^2 it describes (newform pieces are 2-dimensional)."""
        return 2 * (self.h16 + self.h32 + self.h8) + self.trivial + self.chi_m4 + self.chi_m8 + self.chi_8

    @property
    def algebraic_rank(self) -> int:
        return self.trivial + self.chi_m4 + self.chi_m8 + self.chi_8

    def is_admissible(self) -> bool:
        return all(v >= 0 for v in self)


PAPER_MULTIPLICITIES = MultiplicityVector(3, 1, 3, 10, 2, 1, 3)
ZERO_MULTIPLICITIES = MultiplicityVector(0, 0, 0, 0, 0, 0, 0)


def basis_traces(p: int, h16_inert: str = "zero") -> tuple[int, ...]:
    p = check_odd_prime(p)
    return (ap(FormId.h16, p, h16_inert), ap(FormId.h32, p), ap(FormId.h8, p),
            p, chi_m4(p) * p, chi_m8(p) * p, chi_8(p) * p)


def trace_rhs(p: int, m: MultiplicityVector | Iterable[int], h16_inert: str = "zero") -> int:
    m = m if isinstance(m, MultiplicityVector) else MultiplicityVector.of(m)
    return p * p + 1 + sum(mi * ti for mi, ti in zip(m, basis_traces(p, h16_inert)))


def _surface_count(p: int) -> int:
    return count_surface_fast(p).count


def surface_counts(primes: Iterable[int], jobs: int = 1, store=None) -> dict[int, int]:
    """#S(F_p) for each prime, through the cache when one is given."""
    primes = sorted(set(primes))
    out: dict[int, int] = {}
    todo = primes
    if store is not None:
        todo = []
        for p in primes:
            hit = store.lookup(_surface_key(p))
            if hit is None:
                todo.append(p)
            else:
                out[p] = hit
    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            fresh = dict(zip(todo, pool.map(_surface_count, todo)))
    else:
        fresh = {p: _surface_count(p) for p in todo}
    if store is not None:
        for p, v in fresh.items():
            store.put(_surface_key(p), v)
    out.update(fresh)
    return {p: out[p] for p in primes}


def _surface_key(p: int):
    from .store import CacheKey
    return CacheKey("surface", p, 1, "fast")


# --- reports ---------------------------------------------------------------

def picard_report(m: MultiplicityVector) -> dict:
    """Galois-character multiplicities of Pic(S) (over Q-bar) under both
    models of the 48 exceptional curves.

    paper:       24 trivial + 24 chi_{-4} exceptional classes
    permutation: 24 rational nodes (trivial) + 12 conjugate pairs
                 (trivial + chi_{-4} each)
    """
    base = {"trivial": m.trivial, "chi_m4": m.chi_m4, "chi_m8": m.chi_m8, "chi_8": m.chi_8}
    extra = {"paper": (24, 24), "permutation": (36, 12)}
    out = {}
    for hyp, (t, c) in extra.items():
        split = dict(base)
        split["trivial"] += t
        split["chi_m4"] += c
        out[hyp] = {"split": split, "total": sum(split.values()),
                    "algebraic_h2bar": m.algebraic_rank, "exceptional": t + c}
    return out


@dataclass
class FitReport:
    multiplicities: MultiplicityVector
    residuals: dict[int, int]
    conventions: dict[str, str]
    picard_splits: dict
    exceptional_counts: dict[int, dict[str, int]] = field(default_factory=dict)
    counts: dict[int, int] = field(default_factory=dict)

    @property
    def success(self) -> bool:
        return all(r == 0 for r in self.residuals.values())

    @property
    def hypotheses_differ_at(self) -> list[int]:
        return [p for p, v in self.exceptional_counts.items() if v["paper"] != v["permutation"]]

    def to_dict(self) -> dict:
        m = self.multiplicities
        return {
            "multiplicities": dict(zip(BASIS_NAMES, m.as_tuple())),
            "rank_h2bar": m.rank,
            "rank_h2": m.rank + N_EXCEPTIONAL,
            "residuals": {str(p): r for p, r in sorted(self.residuals.items())},
            "success": self.success,
            "conventions": dict(self.conventions),
            "picard_splits": self.picard_splits,
            "surface_counts": {str(p): c for p, c in sorted(self.counts.items())},
            "resolved_counts": {str(p): v for p, v in sorted(self.exceptional_counts.items())},
            "hypotheses_differ_at": self.hypotheses_differ_at,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _exceptional_table(counts: dict[int, int]) -> dict[int, dict[str, int]]:
    return {p: {h: model_resolved_count(p, h, surface_count=c) for h in HYPOTHESES}
            for p, c in counts.items()}


def verify_identity(pmax: int, m: MultiplicityVector = PAPER_MULTIPLICITIES,
                    h16_inert: str = "zero", jobs: int = 1, store=None) -> FitReport:
    """Residuals #S(F_p) - trace_rhs(p, m) for all odd primes 3 <= p <= pmax."""
    if pmax < 3:
        raise ValueError("pmax must be >= 3")
    counts = surface_counts(odd_primes(pmax), jobs=jobs, store=store)
    residuals = {p: c - trace_rhs(p, m, h16_inert) for p, c in counts.items()}
    return FitReport(m, residuals, {"h16_inert": h16_inert}, picard_report(m),
                     _exceptional_table(counts), counts)


def design_matrix(primes: Iterable[int], h16_inert: str = "zero") -> list[list[int]]:
    return [list(basis_traces(p, h16_inert)) for p in primes]


def fit_multiplicities(primes: Iterable[int], h16_inert: str = "zero",
                       holdout: Iterable[int] | None = None, jobs: int = 1,
                       store=None) -> MultiplicityVector:
    """Solve sum_i m_i t_i(p) = #S(F_p) - p^2 - 1 exactly over ``primes``.

    The solution is then checked on ``holdout`` (default: the odd primes up
    to 97 that were not used) and against the rank-30 sum rule.
    """
    primes = sorted({check_odd_prime(p) for p in primes})
    if len(primes) < 8:
        raise RankDeficient(f"need at least 8 primes, got {len(primes)}")
    A = design_matrix(primes, h16_inert)
    if matrix_rank(A) < len(BASIS_NAMES):
        raise RankDeficient(f"design matrix over {primes} has rank {matrix_rank(A)} < 7")
    if holdout is None:
        holdout = [p for p in odd_primes(max(97, primes[-1])) if p not in primes]
    holdout = sorted(set(holdout) - set(primes))
    counts = surface_counts(list(primes) + holdout, jobs=jobs, store=store)
    b = [counts[p] - p * p - 1 for p in primes]
    x = solve_exact(A, b)
    if any(v.denominator != 1 for v in x):
        raise NonIntegral(f"exact solution {[str(v) for v in x]} is not integral")
    m = MultiplicityVector.of(int(v) for v in x)
    bad = {p: counts[p] - trace_rhs(p, m, h16_inert) for p in holdout}
    bad = {p: r for p, r in bad.items() if r}
    if bad:
        raise Inconsistent(f"fitted {m.as_tuple()} fails on held-out primes: {bad}")
    if not m.is_admissible():
        raise InadmissibleSolution(f"fitted multiplicities {m.as_tuple()} have negative entries",
                                   m.as_tuple())
    if m.rank != H2_RANK:
        raise InadmissibleSolution(f"fitted multiplicities give rank {m.rank} != {H2_RANK}",
                                   m.as_tuple())
    return m


def fit_report(pmax: int = 97, fit_pmax: int = 50, h16_inert: str = "zero",
               jobs: int = 1, store=None) -> FitReport:
    """Fit on the odd primes <= fit_pmax, then verify on all odd primes <= pmax."""
    m = fit_multiplicities(odd_primes(fit_pmax), h16_inert,
                           holdout=[p for p in odd_primes(pmax) if p > fit_pmax],
                           jobs=jobs, store=store)
    report = verify_identity(pmax, m, h16_inert, jobs=jobs, store=store)
    report.conventions["fit_primes"] = f"3..{fit_pmax}"
    return report


__all__ = [
    "BASIS_NAMES", "FitError", "FitReport", "Inconsistent", "InadmissibleSolution",
    "MultiplicityVector", "NonIntegral", "PAPER_MULTIPLICITIES", "RankDeficient",
    "ZERO_MULTIPLICITIES",
    "basis_traces", "design_matrix", "fit_multiplicities", "fit_report",
    "picard_report", "surface_counts", "trace_rhs", "verify_identity",
]

"""Euler factors and truncated Euler products for H^2 of the cuboid surface.

A factor is an integer polynomial P(T) = det(1 - Frob_p T), T = p^{-s}:

    weight-3 newform h with character eps, shifted by k:
        1 - a_p(h) p^k T + eps(p) p^{2+2k} T^2
    Dirichlet character chi (zeta: chi = 1), shifted by k:
        1 - chi(p) p^k T

The factor at p = 2 is never computed: it is reported as 1 with an
``excluded`` marker.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .cmforms import EXCLUDED, FormId, ap, extract_g_pair
from .counting import count_curve_X
from .ffield import QuadraticCharacter, check_odd_prime, is_prime, odd_primes

NEWFORM_COMPONENTS = ("h16", "h32", "h8")
CHARACTER_COMPONENTS = ("zeta", "chi_m4", "chi_m8", "chi_8")
COMPONENTS = NEWFORM_COMPONENTS + CHARACTER_COMPONENTS


@dataclass(frozen=True)
class EulerFactor:
    p: int
    coeffs: tuple[int, ...]  # ascending powers of T, coeffs[0] == 1
    excluded: bool = False

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __mul__(self, other: "EulerFactor") -> "EulerFactor":
        if self.p != other.p:
            raise ValueError("factors at different primes")
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return EulerFactor(self.p, tuple(out), self.excluded or other.excluded)

    def __pow__(self, k: int) -> "EulerFactor":
        out = EulerFactor(self.p, (1,), self.excluded)
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, T: float) -> float:
        return sum(c * T ** i for i, c in enumerate(self.coeffs))

    def reciprocal_roots(self) -> np.ndarray:
        """alpha with P(T) = prod (1 - alpha T); only sensible for small degree."""
        if self.degree == 0:
            return np.zeros(0, dtype=complex)
        return np.roots(np.array(self.coeffs, dtype=float)).astype(complex)

    def series_inverse(self, kmax: int) -> list[int]:
        """Coefficients b_0..b_kmax of 1/P(T)."""
        b = [1] + [0] * kmax
        for n in range(1, kmax + 1):
            b[n] = -sum(self.coeffs[j] * b[n - j] for j in range(1, min(n, self.degree) + 1))
        return b


@dataclass(frozen=True)
class Term:
    component: str
    multiplicity: int
    shift: int = 0

    def __post_init__(self):
        if self.component not in COMPONENTS:
            raise ValueError(f"unknown L-function component {self.component!r}")
        if self.multiplicity < 0:
            raise ValueError("multiplicities must be non-negative")

    @property
    def degree(self) -> int:
        return (2 if self.component in NEWFORM_COMPONENTS else 1) * self.multiplicity

    @property
    def root_exponent(self) -> int:
        """log_p |alpha| for every reciprocal root of the local factor."""
        return (1 if self.component in NEWFORM_COMPONENTS else 0) + self.shift


@dataclass(frozen=True)
class LSpec:
    terms: tuple[Term, ...] = ()
    name: str = ""

    @property
    def degree(self) -> int:
        return sum(t.degree for t in self.terms)

    def __add__(self, other: "LSpec") -> "LSpec":
        return LSpec(self.terms + other.terms, self.name or other.name)


def lspec_from_multiplicities(m, exceptional: str | None = None, name: str = "") -> LSpec:
    """LSpec of H^2(S-bar) for a multiplicity vector, optionally with the
    48 exceptional classes of the resolution (``paper`` or ``permutation``)."""
    h16, h32, h8, triv, cm4, cm8, c8 = tuple(m)
    terms = [Term("h16", h16), Term("h32", h32), Term("h8", h8),
             Term("zeta", triv, 1), Term("chi_m4", cm4, 1),
             Term("chi_m8", cm8, 1), Term("chi_8", c8, 1)]
    if exceptional == "paper":
        terms += [Term("zeta", 24, 1), Term("chi_m4", 24, 1)]
    elif exceptional == "permutation":
        terms += [Term("zeta", 36, 1), Term("chi_m4", 12, 1)]
    elif exceptional is not None:
        raise ValueError(f"unknown exceptional hypothesis {exceptional!r}")
    return LSpec(tuple(t for t in terms if t.multiplicity), name)


_PAPER_M = (3, 1, 3, 10, 2, 1, 3)
PRESETS = {
    "sbar": lspec_from_multiplicities(_PAPER_M, None, "sbar"),
    "s-paper": lspec_from_multiplicities(_PAPER_M, "paper", "s-paper"),
    "s-perm": lspec_from_multiplicities(_PAPER_M, "permutation", "s-perm"),
}


def preset(name: str) -> LSpec:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


def euler_factor(component: str, p: int, shift: int | None = None,
                 h16_inert: str = "zero") -> EulerFactor:
    if component not in COMPONENTS:
        raise ValueError(f"unknown L-function component {component!r}")
    if p == 2:
        return EulerFactor(2, (1,), excluded=True)
    p = check_odd_prime(p)
    if component in NEWFORM_COMPONENTS:
        k = 0 if shift is None else shift
        form = FormId(component)
        return EulerFactor(p, (1, -ap(form, p, h16_inert) * p ** k,
                               form.eps(p) * p ** (2 + 2 * k)))
    k = 1 if shift is None else shift
    chi = 1 if component == "zeta" else QuadraticCharacter[component](p)
    return EulerFactor(p, (1, -chi * p ** k))


def component_factors(spec: LSpec, p: int, h16_inert: str = "zero") -> list[tuple[EulerFactor, int]]:
    return [(euler_factor(t.component, p, t.shift, h16_inert), t.multiplicity) for t in spec.terms]


def aggregate_factor(spec: LSpec, p: int, h16_inert: str = "zero") -> EulerFactor:
    out = EulerFactor(p, (1,), excluded=(p == 2))
    for f, mult in component_factors(spec, p, h16_inert):
        out = out * f ** mult
    return out


def reciprocal_roots(spec: LSpec, p: int, h16_inert: str = "zero") -> np.ndarray:
    """All reciprocal roots of the aggregate factor, with multiplicity.

    Taken component by component: the aggregate polynomial has coefficients
    of size p^{2 deg}, far beyond what a float root-finder can resolve.
    """
    parts = [np.repeat(f.reciprocal_roots(), mult) for f, mult in component_factors(spec, p, h16_inert)]
    return np.concatenate(parts) if parts else np.zeros(0, dtype=complex)


def dirichlet_coeffs(spec: LSpec, N: int, h16_inert: str = "zero") -> list:
    """[a_1, ..., a_N] of prod_p 1/P_p(p^{-s}) over odd p; EXCLUDED at even n."""
    if N > 10 ** 5:
        raise ValueError("N <= 10^5")
    coeffs: list = [EXCLUDED] * (N + 1)
    for n in range(1, N + 1, 2):
        coeffs[n] = 1
    for p in odd_primes(N):
        kmax = int(math.log(N, p)) + 1
        while p ** kmax > N:
            kmax -= 1
        local = aggregate_factor(spec, p, h16_inert).series_inverse(kmax)
        pk = p
        for k in range(1, kmax + 1):
            # n = p^k * m with p not dividing m, m odd
            for n in range(pk, N + 1, 2 * pk):
                if (n // pk) % p:
                    coeffs[n] *= local[k]
            pk *= p
    return coeffs[1:]


@dataclass(frozen=True)
class PartialValue:
    value: float
    tail_bound: float
    s: float
    pmax: int


def evaluate_partial(spec: LSpec, s: float, pmax: int, h16_inert: str = "zero") -> PartialValue:
    """prod_{3 <= p <= pmax} 1/P_p(p^{-s}) with a bound on |full - truncated|.

    With |alpha| <= p^e for every reciprocal root and d = degree, the log of
    the tail is at most d * sum_{n > pmax odd} -log(1 - n^{e-s}).
    """
    if s <= 3:
        raise ValueError("s must exceed 3")
    e = max((t.root_exponent for t in spec.terms), default=0)
    sigma = s - e
    if spec.terms and sigma <= 1:
        raise ValueError(f"s = {s} is outside the region of absolute convergence")
    log_value = 0.0
    for p in odd_primes(pmax):
        for f, mult in component_factors(spec, p, h16_inert):
            log_value -= mult * math.log(f(p ** -s))
    value = math.exp(log_value)
    if not spec.terms:
        return PartialValue(value, 0.0, s, pmax)
    M = pmax + 1 if pmax % 2 == 0 else pmax + 2
    power_sum = M ** -sigma + M ** (1 - sigma) / (2 * (sigma - 1))
    log_tail = spec.degree * power_sum / (1 - M ** -sigma)
    return PartialValue(value, value * math.expm1(log_tail), s, pmax)


# --- tables ----------------------------------------------------------------

EXCLUSION_NOTE = "index-2 data excluded: p = 2 is the bad prime (all levels are powers of 2)"


def table_rows(pmax: int, spec: LSpec | None = None, surface_counts: dict[int, int] | None = None,
               h16_inert: str = "zero") -> list[dict]:
    from .tracefit import surface_counts as _counts

    spec = spec or PRESETS["sbar"]
    primes = odd_primes(pmax)
    counts = surface_counts or _counts(primes)
    rows = []
    for p in primes:
        g = extract_g_pair(p)
        g_re, g_im = g.as_re_im()
        fac = aggregate_factor(spec, p, h16_inert)
        rows.append({
            "p": p,
            "a_f32": ap(FormId.f32, p), "a_f64": ap(FormId.f64, p),
            "g_pair_re": g_re, "g_pair_im": g_im,
            "a_h8": ap(FormId.h8, p), "a_h16": ap(FormId.h16, p, h16_inert), "a_h32": ap(FormId.h32, p),
            "count_surface": counts[p], "count_X": count_curve_X(p).count,
            "factor": list(fac.coeffs),
        })
    return rows


def _flat(row: dict) -> dict:
    out = {k: v for k, v in row.items() if k != "factor"}
    out.update({f"factor_c{i}": c for i, c in enumerate(row["factor"])})
    return out


def export_table(pmax: int, csv_path=None, json_path=None, spec: LSpec | None = None,
                 surface_counts: dict[int, int] | None = None, h16_inert: str = "zero") -> list[dict]:
    """Per-prime coefficients, counts and Euler factors, optionally written to disk."""
    spec = spec or PRESETS["sbar"]
    rows = table_rows(pmax, spec, surface_counts, h16_inert)
    if csv_path is not None:
        try:
            with open(csv_path, "w", newline="") as fh:
                write_csv(rows, fh)
        except OSError as exc:
            raise OSError(f"cannot write CSV table to {csv_path}: {exc.strerror or exc}") from exc
    if json_path is not None:
        try:
            with open(json_path, "w") as fh:
                fh.write(table_json(rows, spec))
        except OSError as exc:
            raise OSError(f"cannot write JSON table to {json_path}: {exc.strerror or exc}") from exc
    return rows


def write_csv(rows: list[dict], fh) -> None:
    fh.write(f"# {EXCLUSION_NOTE}\n")
    flat = [_flat(r) for r in rows]
    fields = list(flat[0]) if flat else ["p"]
    writer = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    writer.writerows(flat)


def table_json(rows: list[dict], spec: LSpec) -> str:
    doc = {
        "excluded": {"p": 2, "note": EXCLUSION_NOTE},
        "preset": spec.name,
        "degree": spec.degree,
        "rows": [{**{k: v for k, v in r.items() if not k.startswith("g_pair")},
                  "g_pair": {"re": r["g_pair_re"], "im": r["g_pair_im"]}} for r in rows],
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def prime_coefficients(spec: LSpec, primes: Iterable[int], h16_inert: str = "zero") -> dict[int, int]:
    """Trace of Frobenius (= the p-th Dirichlet coefficient) for each prime."""
    return {p: -aggregate_factor(spec, p, h16_inert).coeffs[1] for p in primes if is_prime(p)}

"""Fourier coefficients of the CM newforms attached to X(8) and the surface.

Weight 2 (H^1 of X):
    f32, f64      CM by Q(i),      trivial character
    g64 (pair)    CM by Q(sqrt-2), character chi_8 (the two forms are conjugate)
Weight 3 (H^2 of the surface):
    h16           CM by Q(i),      character chi_{-4}
    h8, h32       CM by Q(sqrt-2), character chi_{-8}; h32 = h8 twisted by chi_8

Coefficients at primes come from p = a^2 + b^2 or p = a^2 + 2b^2.  The
g64 pair is never split into its two members: only the conjugation-stable
pair {a, conj(a)} is exposed, extracted from point counts on X.
p = 2 is excluded throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .counting import count_curve_X, count_elliptic, VarietyId
from .ffield import QuadraticCharacter, check_odd_prime, chi_8, chi_m4, chi_m8

H16_INERT_CONVENTIONS = ("zero", "minus2p")


class ExcludedType:
    """Marker for index-2 data (the bad prime)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "EXCLUDED"

    def __reduce__(self):
        return (ExcludedType, ())


EXCLUDED = ExcludedType()


class FormId(str, Enum):
    f32 = "f32"
    f64 = "f64"
    g64_pair = "g64_pair"
    h8 = "h8"
    h16 = "h16"
    h32 = "h32"

    @property
    def weight(self) -> int:
        return 2 if self in (FormId.f32, FormId.f64, FormId.g64_pair) else 3

    @property
    def level(self) -> int:
        return {"f32": 32, "f64": 64, "g64_pair": 64, "h8": 8, "h16": 16, "h32": 32}[self.value]

    @property
    def nebentypus(self) -> QuadraticCharacter | None:
        return {FormId.f32: None, FormId.f64: None, FormId.g64_pair: chi_8,
                FormId.h8: chi_m8, FormId.h32: chi_m8, FormId.h16: chi_m4}[self]

    @property
    def cm_field(self) -> str:
        return "Q(i)" if self in (FormId.f32, FormId.f64, FormId.h16) else "Q(sqrt(-2))"

    def eps(self, p: int) -> int:
        chi = self.nebentypus
        return 1 if chi is None else chi(p)


# --- Gaussian integers -----------------------------------------------------

@dataclass(frozen=True, order=True)
class GaussianInt:
    re: int
    im: int = 0

    @staticmethod
    def coerce(z) -> "GaussianInt":
        return z if isinstance(z, GaussianInt) else GaussianInt(int(z), 0)

    def __add__(self, other):
        o = GaussianInt.coerce(other)
        return GaussianInt(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianInt(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussianInt.coerce(other))

    def __rsub__(self, other):
        return GaussianInt.coerce(other) - self

    def __mul__(self, other):
        o = GaussianInt.coerce(other)
        return GaussianInt(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = GaussianInt(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            return self.im == 0 and self.re == other
        if isinstance(other, GaussianInt):
            return (self.re, self.im) == (other.re, other.im)
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def conj(self) -> "GaussianInt":
        return GaussianInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def __repr__(self):
        if self.im == 0:
            return f"{self.re}"
        if self.re == 0:
            return f"{self.im}i"
        return f"{self.re}{self.im:+d}i"


@dataclass(frozen=True)
class CoeffPair:
    """Unordered pair {a, conj(a)}; stored sorted so equality is set equality."""

    first: GaussianInt
    second: GaussianInt

    @classmethod
    def of(cls, a, b) -> "CoeffPair":
        a, b = sorted((GaussianInt.coerce(a), GaussianInt.coerce(b)))
        return cls(a, b)

    @property
    def values(self) -> tuple[GaussianInt, GaussianInt]:
        return (self.first, self.second)

    def is_conjugation_stable(self) -> bool:
        return CoeffPair.of(self.first.conj(), self.second.conj()) == self

    def trace(self) -> GaussianInt:
        return self.first + self.second

    def product(self) -> GaussianInt:
        return self.first * self.second

    def as_re_im(self) -> tuple[int, int]:
        """(Re a, |Im a|) -- enough to reconstruct a conjugation-stable pair."""
        return (self.first.re, abs(self.first.im))

    def __repr__(self):
        return f"{{{self.first!r}, {self.second!r}}}"


# --- prime decompositions --------------------------------------------------

def two_squares_normalized(p: int) -> tuple[int, int]:
    """p = a^2 + b^2 with a odd and a + b = 1 mod 4; returns (a, |b|)."""
    p = check_odd_prime(p)
    if p % 4 != 1:
        raise ValueError(f"{p} is not 1 mod 4")
    for b in range(0, math.isqrt(p) + 1, 2):
        a = math.isqrt(p - b * b)
        if a * a == p - b * b:
            want = 1 if b % 4 == 0 else 3
            return (a if a % 4 == want else -a), b
    raise AssertionError(f"no two-square decomposition for {p}")


def a2b2_decomp(p: int) -> tuple[int, int]:
    """p = a^2 + 2b^2; returns (|a|, |b|)."""
    p = check_odd_prime(p)
    if p % 8 not in (1, 3):
        raise ValueError(f"{p} is inert in Q(sqrt(-2))")
    for b in range(1, math.isqrt(p // 2) + 1):
        a = math.isqrt(p - 2 * b * b)
        if a * a == p - 2 * b * b:
            return a, b
    raise AssertionError(f"no decomposition a^2 + 2b^2 for {p}")


# --- coefficients at primes ------------------------------------------------

@lru_cache(maxsize=None)
def ap(form: FormId | str, p: int, h16_inert: str = "zero") -> int:
    """a_p of f32, f64, h8, h16 or h32 at an odd prime.

    ``h16_inert`` picks a_p(h16) at p = 3 mod 4: ``zero`` (the CM vanishing
    value) or ``minus2p`` (the value forced by reading V_f^{(x)2} as
    V_h16 + two Tate twists at every prime).
    """
    form = FormId(form)
    p = check_odd_prime(p)
    if form is FormId.g64_pair:
        raise ValueError("g64 coefficients are only available as a pair; use extract_g_pair")
    if form is FormId.f32:
        return 2 * two_squares_normalized(p)[0] if p % 4 == 1 else 0
    if form is FormId.f64:
        return chi_8(p) * ap(FormId.f32, p)
    if form is FormId.h8:
        if p % 8 in (5, 7):
            return 0
        a, b = a2b2_decomp(p)
        return 2 * (a * a - 2 * b * b)
    if form is FormId.h32:
        return chi_8(p) * ap(FormId.h8, p)
    # h16
    if h16_inert not in H16_INERT_CONVENTIONS:
        raise ValueError(f"unknown h16 inert convention {h16_inert!r}")
    if p % 4 == 3:
        return 0 if h16_inert == "zero" else -2 * p
    a, b = two_squares_normalized(p)
    return 2 * (a * a - b * b)


def ap_oracle_elliptic(form: FormId | str, p: int) -> int:
    """a_p(f32) or a_p(f64) by counting points on y^2 = x^3 -+ x."""
    form = FormId(form)
    curve = {FormId.f32: VarietyId.E32, FormId.f64: VarietyId.E64}.get(form)
    if curve is None:
        raise ValueError("the elliptic oracle covers f32 and f64 only")
    return count_elliptic(curve, p)


def _isqrt_exact(n: int) -> int | None:
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


class ExtractionError(ArithmeticError):
    pass


@lru_cache(maxsize=None)
def extract_g_pair(p: int) -> CoeffPair:
    """The g64 coefficient pair from #X(F_p) and #X(F_{p^2}).

    H^1(X) = 2 f32 + f64 + g+ + g-, so the first and second Frobenius power
    sums on H^1 are p + 1 - #X(F_p) and p^2 + 1 - #X(F_{p^2}).  Removing the
    known f32/f64 parts leaves a+ + a- and a+^2 + a-^2.
    """
    p = check_odd_prime(p)
    s1 = p + 1 - count_curve_X(p, 1).count
    s2 = p * p + 1 - count_curve_X(p, 2).count
    a32, a64 = ap(FormId.f32, p), ap(FormId.f64, p)
    eps = chi_8(p)
    trace = s1 - 2 * a32 - a64
    sum_sq = s2 - 2 * (a32 * a32 - 2 * p) - (a64 * a64 - 2 * p) + 4 * eps * p
    if (trace * trace - sum_sq) % 2:
        raise ExtractionError(f"p={p}: non-integral elementary symmetric function")
    prod = (trace * trace - sum_sq) // 2
    disc = trace * trace - 4 * prod
    root = _isqrt_exact(abs(disc))
    if root is None or (trace + root) % 2:
        raise ExtractionError(f"p={p}: roots of z^2 - {trace}z + {prod} are not in Z[i]")
    if disc >= 0:
        pair = CoeffPair.of((trace + root) // 2, (trace - root) // 2)
    else:
        pair = CoeffPair.of(GaussianInt(trace // 2, root // 2), GaussianInt(trace // 2, -(root // 2)))
    if not pair.is_conjugation_stable():
        raise ExtractionError(f"p={p}: extracted pair {pair} is not conjugation-stable")
    return pair


# --- q-expansions ----------------------------------------------------------

def _factor_odd(n: int) -> list[tuple[int, int]]:
    out = []
    d = 3
    while d * d <= n:
        if n % d == 0:
            k = 0
            while n % d == 0:
                n //= d
                k += 1
            out.append((d, k))
        d += 2
    if n > 1:
        out.append((n, 1))
    return out


def _prime_power_values(a_p, eps_term: int, kmax: int) -> list:
    """[a_1, a_p, a_{p^2}, ...] from a_{p^{k+1}} = a_p a_{p^k} - eps_term a_{p^{k-1}}."""
    vals = [1, a_p]
    while len(vals) <= kmax:
        vals.append(a_p * vals[-1] - eps_term * vals[-2])
    return vals


def coefficient(form: FormId | str, n: int, h16_inert: str = "zero"):
    """a_n for odd n.  For g64_pair returns a CoeffPair, or None when the
    pair at n depends on the unknown relative signs at two or more primes."""
    form = FormId(form)
    n = int(n)
    if n < 1:
        raise ValueError("n must be positive")
    if n % 2 == 0:
        raise ValueError(f"a_{n}: even-indexed coefficients are excluded (bad prime 2)")
    w = form.weight
    if form is not FormId.g64_pair:
        value = 1
        for p, k in _factor_odd(n):
            vals = _prime_power_values(ap(form, p, h16_inert), form.eps(p) * p ** (w - 1), k)
            value *= vals[k]
        return value
    real_part = GaussianInt(1)
    complex_parts = []
    for p, k in _factor_odd(n):
        r = extract_g_pair(p).first
        v = _prime_power_values(r, chi_8(p) * p, k)[k]
        if v.is_real:
            real_part = real_part * v
        else:
            complex_parts.append(v)
    if len(complex_parts) > 1:
        return None
    if not complex_parts:
        return CoeffPair.of(real_part, real_part)
    z = real_part * complex_parts[0]
    return CoeffPair.of(z, z.conj())


def qexp(form: FormId | str, N: int, h16_inert: str = "zero") -> list:
    """[a_1, ..., a_N] with EXCLUDED at even indices.

    Index 0 of the returned list is a_1.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    return [coefficient(form, n, h16_inert) if n % 2 else EXCLUDED for n in range(1, N + 1)]


def eta_oracle_h16(N: int) -> np.ndarray:
    """Coefficients c[0..N] of q * prod_{n>=1} (1 - q^{4n})^6."""
    if N > 10 ** 5:
        raise ValueError("N <= 10^5")
    m = max((N - 1) // 4, 0)
    poly = np.zeros(m + 1, dtype=np.int64)
    poly[0] = 1
    for n in range(1, m + 1):
        for _ in range(6):
            poly[n:] = poly[n:] - poly[:-n]
    out = np.zeros(N + 1, dtype=np.int64)
    if N >= 1:
        out[1::4][: m + 1] = poly[: len(out[1::4])]
    return out

"""Prime-field arithmetic and the quadratic characters of conductor 4 and 8.

Everything here works at a fixed odd prime.  ``PrimeContext`` carries the
square-root-count table used by all of the point-counting kernels, and
``QuadraticExtension`` builds F_{p^2} = F_p[w]/(w^2 - nu) with nu the least
quadratic non-residue.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

#: largest p for which extension-field counts are allowed (int64 headroom)
EXTENSION_PMAX = 1000


class BadPrimeError(ValueError):
    """Raised for p = 2 or a non-prime where an odd prime is required."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def check_odd_prime(p: int) -> int:
    p = int(p)
    if p == 2:
        raise BadPrimeError("p = 2 is the bad prime: excluded")
    if not is_prime(p):
        raise BadPrimeError(f"{p} is not an odd prime")
    return p


def odd_primes(pmax: int, pmin: int = 3) -> list[int]:
    return [q for q in range(max(pmin, 3), pmax + 1) if is_prime(q)]


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) by Euler's criterion."""
    check_odd_prime(p)
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@dataclass(frozen=True)
class PrimeContext:
    p: int
    sqrt_table: np.ndarray = field(repr=False, compare=False)
    nonresidue: int

    def sqrt_count(self, t: int) -> int:
        return int(self.sqrt_table[int(t) % self.p])


@lru_cache(maxsize=None)
def prime_context(p: int) -> PrimeContext:
    p = check_odd_prime(p)
    squares = np.arange(p, dtype=np.int64) ** 2 % p
    table = np.bincount(squares, minlength=p).astype(np.int64)
    table.setflags(write=False)
    nu = next(t for t in range(2, p) if table[t] == 0)
    return PrimeContext(p, table, nu)


def sqrt_count(t: int, ctx: PrimeContext) -> int:
    return ctx.sqrt_count(t)


class QuadraticCharacter(Enum):
    """Kronecker symbols (-4|.), (8|.), (-8|.) on odd integers."""

    chi_m4 = -4  # chi_{Q(sqrt(-1))}
    chi_8 = 8    # chi_{Q(sqrt(2))}
    chi_m8 = -8  # chi_{Q(sqrt(-2))}

    @property
    def period(self) -> int:
        return 4 if self is QuadraticCharacter.chi_m4 else 8

    def __call__(self, n: int) -> int:
        return character_value(self, n)


_CHAR_TABLES = {
    QuadraticCharacter.chi_m4: {1: 1, 3: -1},
    QuadraticCharacter.chi_8: {1: 1, 3: -1, 5: -1, 7: 1},
    QuadraticCharacter.chi_m8: {1: 1, 3: 1, 5: -1, 7: -1},
}


def character_value(chi: QuadraticCharacter | str, n: int) -> int:
    if isinstance(chi, str):
        chi = QuadraticCharacter[chi]
    n = int(n)
    if n % 2 == 0:
        raise ValueError(f"{chi.name} is only evaluated on odd integers, got {n}")
    return _CHAR_TABLES[chi][n % chi.period]


chi_m4 = QuadraticCharacter.chi_m4
chi_8 = QuadraticCharacter.chi_8
chi_m8 = QuadraticCharacter.chi_m8


# --- F_{p^2} ---------------------------------------------------------------

@dataclass(frozen=True)
class QuadExtElement:
    """x0 + x1*w in F_p[w]/(w^2 - nu)."""

    x0: int
    x1: int
    ext: "QuadraticExtension" = field(repr=False, compare=False)

    def _wrap(self, x0: int, x1: int) -> "QuadExtElement":
        p = self.ext.p
        return QuadExtElement(x0 % p, x1 % p, self.ext)

    def __add__(self, other):
        return self._wrap(self.x0 + other.x0, self.x1 + other.x1)

    def __sub__(self, other):
        return self._wrap(self.x0 - other.x0, self.x1 - other.x1)

    def __neg__(self):
        return self._wrap(-self.x0, -self.x1)

    def __mul__(self, other):
        nu = self.ext.nu
        return self._wrap(self.x0 * other.x0 + nu * self.x1 * other.x1,
                          self.x0 * other.x1 + self.x1 * other.x0)

    def __pow__(self, e: int):
        result = self.ext.one
        base = self
        if e < 0:
            base, e = base.inverse(), -e
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __bool__(self):
        return bool(self.x0 or self.x1)

    def norm(self) -> int:
        p = self.ext.p
        return (self.x0 * self.x0 - self.ext.nu * self.x1 * self.x1) % p

    def inverse(self) -> "QuadExtElement":
        if not self:
            raise ZeroDivisionError("inverse of 0 in F_{p^2}")
        n_inv = pow(self.norm(), -1, self.ext.p)
        return self._wrap(self.x0 * n_inv, -self.x1 * n_inv)

    def is_square(self) -> bool:
        if not self:
            return True
        q = self.ext.q
        return (self ** ((q - 1) // 2)) == self.ext.one

    @property
    def index(self) -> int:
        return self.x0 + self.ext.p * self.x1


class QuadraticExtension:
    """F_{p^2} with elements encoded as integers x0 + p*x1 for vector work."""

    def __init__(self, ctx: PrimeContext):
        if ctx.p > EXTENSION_PMAX:
            raise ValueError(f"extension-field counting limited to p <= {EXTENSION_PMAX}")
        self.ctx = ctx
        self.p = ctx.p
        self.nu = ctx.nonresidue
        self.q = self.p * self.p
        self.zero = QuadExtElement(0, 0, self)
        self.one = QuadExtElement(1, 0, self)
        self._table = None

    def element(self, x0: int, x1: int = 0) -> QuadExtElement:
        return QuadExtElement(x0 % self.p, x1 % self.p, self)

    def from_index(self, k: int) -> QuadExtElement:
        return self.element(k % self.p, k // self.p)

    def elements(self):
        return (self.from_index(k) for k in range(self.q))

    # vectorised arithmetic on index arrays
    def split(self, idx: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return idx % self.p, idx // self.p

    def join(self, x0: np.ndarray, x1: np.ndarray) -> np.ndarray:
        return x0 % self.p + self.p * (x1 % self.p)

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a0, a1 = self.split(a)
        b0, b1 = self.split(b)
        p = self.p
        return self.join((a0 * b0 + self.nu * (a1 * b1 % p)) % p, a0 * b1 + a1 * b0)

    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a0, a1 = self.split(a)
        b0, b1 = self.split(b)
        return self.join(a0 + b0, a1 + b1)

    def vscale(self, c: int, a: np.ndarray) -> np.ndarray:
        a0, a1 = self.split(a)
        return self.join(c * a0, c * a1)

    @property
    def sqrt_table(self) -> np.ndarray:
        """#{y : y^2 = t} for every t, indexed by element code."""
        if self._table is None:
            idx = np.arange(self.q, dtype=np.int64)
            table = np.bincount(self.vmul(idx, idx), minlength=self.q).astype(np.int64)
            table.setflags(write=False)
            self._table = table
        return self._table

    def sqrt_count(self, t: QuadExtElement) -> int:
        return 1 if not t else (2 if t.is_square() else 0)


@lru_cache(maxsize=64)
def build_quadratic_extension(ctx: PrimeContext) -> QuadraticExtension:
    return QuadraticExtension(ctx)

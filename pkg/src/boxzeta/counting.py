"""Point counts over F_p and F_{p^2}.

Varieties:

* the cuboid surface in P^6 with coordinates [a1:a2:a3:b1:b2:b3:c],
  cut out by a_i^2 + b_i^2 = c^2 (i = 1, 2, 3) and a1^2 + a2^2 + a3^2 = c^2;
* the genus-5 curve X in P^4, u^2 = 2xy, v^2 = x^2 - y^2, w^2 = x^2 + y^2;
* the 48 singular points of the surface;
* the elliptic curves E32: y^2 = x^3 - x and E64: y^2 = x^3 + x.

Projective counts go through the affine cone: count the solutions in
F_q^{n+1}, subtract the origin, divide by q - 1.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .ffield import (
    EXTENSION_PMAX,
    build_quadratic_extension,
    check_odd_prime,
    chi_m4,
    prime_context,
)

BRUTE_SURFACE_PMAX = 13
CURVE_DEGREE2_PMAX = 200


class VarietyId(str, Enum):
    CUBOID_SURFACE = "surface"
    CURVE_X = "curve-x"
    SINGULAR_LOCUS = "singular"
    E32 = "E32"
    E64 = "E64"


@dataclass(frozen=True)
class CountRecord:
    variety: VarietyId
    p: int
    degree: int
    count: int
    method: str  # "fast" or "brute"

    def to_dict(self) -> dict:
        return {"variety": self.variety.value, "p": self.p, "degree": self.degree,
                "count": self.count, "method": self.method}


def _projectivize(cone_count: int, q: int, what: str) -> int:
    if (cone_count - 1) % (q - 1):
        raise AssertionError(
            f"{what}: affine cone count {cone_count} - 1 is not divisible by q - 1 = {q - 1}")
    return (cone_count - 1) // (q - 1)


# --- the cuboid surface ----------------------------------------------------

def count_surface_fast(p: int) -> CountRecord:
    """#S(F_p) in O(p^3) table lookups.

    For fixed (a1, a2, a3) put s = a1^2 + a2^2 + a3^2.  Then c runs over the
    roots of c^2 = s and each b_i over the roots of b_i^2 = s - a_i^2, so the
    cone fibre has size sc(s) * prod_i sc(s - a_i^2).
    """
    p = check_odd_prime(p)
    sc = prime_context(p).sqrt_table
    sq = np.arange(p, dtype=np.int64) ** 2 % p
    a2 = sq[:, None]
    a3 = sq[None, :]
    partial = (a2 + a3) % p
    total = 0
    # one slab per a1 keeps memory at O(p^2)
    for a1 in sq:
        s = (partial + a1) % p
        fibre = sc[s] * sc[(s - a1) % p] * sc[(s - a2) % p] * sc[(s - a3) % p]
        total += int(fibre.sum())
    return CountRecord(VarietyId.CUBOID_SURFACE, p, 1,
                       _projectivize(total, p, "surface"), "fast")


def count_surface_brute(p: int) -> CountRecord:
    """Enumerate every vector of F_p^7 and test the four quadrics."""
    p = check_odd_prime(p)
    if p > BRUTE_SURFACE_PMAX:
        raise ValueError(f"brute-force surface count costs p^7; refusing p = {p} > {BRUTE_SURFACE_PMAX}")
    r = np.arange(p, dtype=np.int64)
    a3, b1, b2, b3, c = np.meshgrid(r, r, r, r, r, indexing="ij", sparse=True)
    c2 = c * c
    eq3 = (a3 * a3 + b3 * b3 - c2) % p == 0
    total = 0
    for a1, a2 in itertools.product(range(p), repeat=2):
        ok = eq3
        ok = ok & ((a1 * a1 + b1 * b1 - c2) % p == 0)
        ok = ok & ((a2 * a2 + b2 * b2 - c2) % p == 0)
        ok = ok & ((a1 * a1 + a2 * a2 + a3 * a3 - c2) % p == 0)
        total += int(np.count_nonzero(ok))
    return CountRecord(VarietyId.CUBOID_SURFACE, p, 1,
                       _projectivize(total, p, "surface (brute)"), "brute")


# --- the curve X -----------------------------------------------------------

def _field_tables(p: int, degree: int):
    """(q, sqrt-count table, elements, mul, add, scale) for F_q, q = p^degree."""
    if degree == 1:
        sc = prime_context(p).sqrt_table
        return (p, sc, np.arange(p, dtype=np.int64),
                lambda a, b: a * b % p, lambda a, b: (a + b) % p, lambda c, a: c * a % p)
    if degree == 2:
        ext = build_quadratic_extension(prime_context(p))
        return (ext.q, ext.sqrt_table, np.arange(ext.q, dtype=np.int64),
                ext.vmul, ext.vadd, ext.vscale)
    raise ValueError(f"degree must be 1 or 2, got {degree}")


def _check_curve_args(p: int, degree: int) -> int:
    p = check_odd_prime(p)
    if degree not in (1, 2):
        raise ValueError(f"degree must be 1 or 2, got {degree}")
    if degree == 2 and p > CURVE_DEGREE2_PMAX:
        raise ValueError(f"degree-2 curve counts limited to p <= {CURVE_DEGREE2_PMAX}")
    return p


def count_curve_X(p: int, degree: int = 1) -> CountRecord:
    """#X(F_q), q = p^degree.

    The cone sum over (x, y) of sc(2xy) sc(x^2-y^2) sc(x^2+y^2) is
    homogeneous of even degree in (x, y), and sc is invariant under scaling
    by a nonzero square.  So the y = 0 line contributes 4(q-1), every other
    line through the origin contributes (q-1) * F(t) with x = t*y, and
    #X = 4 + sum_t F(t).  O(q) work instead of O(q^2).
    """
    p = _check_curve_args(p, degree)
    q, sc, t, mul, add, scale = _field_tables(p, degree)
    one = np.ones_like(t[:1])
    t2 = mul(t, t)
    f = sc[scale(2, t)] * sc[add(t2, scale(-1, one))] * sc[add(t2, one)]
    cone = 1 + 4 * (q - 1) + (q - 1) * int(f.sum())
    return CountRecord(VarietyId.CURVE_X, p, degree,
                       _projectivize(cone, q, "curve X"), "fast")


def count_curve_X_cone(p: int, degree: int = 1) -> CountRecord:
    """Same count by the literal O(q^2) cone sum over (x, y)."""
    p = _check_curve_args(p, degree)
    q, sc, elts, mul, add, scale = _field_tables(p, degree)
    total = 0
    for x in elts:
        xs = np.full_like(elts, x)
        x2 = mul(xs, xs)
        y2 = mul(elts, elts)
        f = (sc[scale(2, mul(xs, elts))] * sc[add(x2, scale(-1, y2))] * sc[add(x2, y2)])
        total += int(f.sum())
    return CountRecord(VarietyId.CURVE_X, p, degree,
                       _projectivize(total, q, "curve X (cone)"), "brute")


def count_curve_X_brute(p: int, degree: int = 1) -> CountRecord:
    """Enumerate the whole cone in F_q^5 and test the three quadrics."""
    p = _check_curve_args(p, degree)
    q, _, elts, mul, add, scale = _field_tables(p, degree)
    if q ** 5 > 5 * 10 ** 7:
        raise ValueError(f"brute-force P^4 enumeration too large for q = {q}")
    x, y, u = np.meshgrid(elts, elts, elts, indexing="ij", sparse=True)
    x, y, u = (np.broadcast_to(a, (q, q, q)).ravel() for a in (x, y, u))
    x2, y2 = mul(x, x), mul(y, y)
    ok_u = mul(u, u) == scale(2, mul(x, y))
    vv = add(x2, scale(-1, y2))
    ww = add(x2, y2)
    squares = mul(elts, elts)
    # count v with v^2 = vv and w with w^2 = ww by direct comparison
    nv = np.zeros(q * q * q, dtype=np.int64)
    nw = np.zeros(q * q * q, dtype=np.int64)
    for s in squares:
        nv += vv == s
        nw += ww == s
    total = int((ok_u * nv * nw).sum())
    return CountRecord(VarietyId.CURVE_X, p, degree,
                       _projectivize(total, q, "curve X (brute)"), "brute")


# --- singular locus --------------------------------------------------------

# the 48 singular points [a1:a2:a3:b1:b2:b3:c]; i = sqrt(-1)
SINGULAR_TABLE = """
0:0:-1:-1:-1:0:1  0:0:-1:-1:1:0:1  0:0:-1:1:-1:0:1  0:0:-1:1:1:0:1
0:0:1:-1:-1:0:1  0:0:1:-1:1:0:1  0:0:1:1:-1:0:1  0:0:1:1:1:0:1
0:-1:0:-1:0:-1:1  0:-1:0:-1:0:1:1  0:-1:0:1:0:-1:1  0:-1:0:1:0:1:1
0:1:0:-1:0:-1:1  0:1:0:-1:0:1:1  0:1:0:1:0:-1:1  0:1:0:1:0:1:1
-1:0:0:0:-1:-1:1  -1:0:0:0:-1:1:1  -1:0:0:0:1:-1:1  -1:0:0:0:1:1:1
1:0:0:0:-1:-1:1  1:0:0:0:-1:1:1  1:0:0:0:1:-1:1  1:0:0:0:1:1:1
0:-1:-i:0:-i:1:0  0:-1:-i:0:i:1:0  0:-1:i:0:-i:1:0  0:-1:i:0:i:1:0
0:1:-i:0:-i:1:0  0:1:-i:0:i:1:0  0:1:i:0:-i:1:0  0:1:i:0:i:1:0
-1:0:-i:-i:0:1:0  -1:0:-i:i:0:1:0  -1:0:i:-i:0:1:0  -1:0:i:i:0:1:0
1:0:-i:-i:0:1:0  1:0:-i:i:0:1:0  1:0:i:-i:0:1:0  1:0:i:i:0:1:0
-1:-i:0:-i:1:0:0  -1:-i:0:i:1:0:0  -1:i:0:-i:1:0:0  -1:i:0:i:1:0:0
1:-i:0:-i:1:0:0  1:-i:0:i:1:0:0  1:i:0:-i:1:0:0  1:i:0:i:1:0:0
"""

_SYMBOLS = {"0": (0, 0), "1": (1, 0), "-1": (-1, 0), "i": (0, 1), "-i": (0, -1)}


@dataclass(frozen=True)
class SingularPoint:
    coords: tuple[tuple[int, int], ...]  # Gaussian integers (re, im)

    @property
    def rationality(self) -> str:
        return "Q" if all(im == 0 for _, im in self.coords) else "Q(i)"

    def quadric_values(self) -> tuple[tuple[int, int], ...]:
        def sq(z):
            re, im = z
            return (re * re - im * im, 2 * re * im)

        def plus(*zs):
            return (sum(z[0] for z in zs), sum(z[1] for z in zs))

        a1, a2, a3, b1, b2, b3, c = (sq(z) for z in self.coords)
        minus_c = (-c[0], -c[1])
        return (plus(a1, b1, minus_c), plus(a2, b2, minus_c),
                plus(a3, b3, minus_c), plus(a1, a2, a3, minus_c))

    def reduce(self, p: int, i_mod_p: int) -> tuple[int, ...]:
        return tuple((re + im * i_mod_p) % p for re, im in self.coords)


def singular_points() -> list[SingularPoint]:
    return [SingularPoint(tuple(_SYMBOLS[s] for s in tok.split(":")))
            for tok in SINGULAR_TABLE.split()]


def _normalize(v: tuple[int, ...], p: int) -> tuple[int, ...]:
    lead = next(x for x in v if x)
    inv = pow(lead, -1, p)
    return tuple(x * inv % p for x in v)


def count_singular(p: int) -> int:
    """Number of F_p-rational singular points: 24, or 48 when sqrt(-1) is in F_p."""
    p = check_odd_prime(p)
    pts = singular_points()
    rational = [pt for pt in pts if pt.rationality == "Q"]
    if p % 4 == 3:
        reduced = {_normalize(pt.reduce(p, 0), p) for pt in rational}
        if len(reduced) != len(rational):
            raise AssertionError(f"singular points collide mod {p}")
        return len(rational)
    i_p = next(x for x in range(2, p) if (x * x + 1) % p == 0)
    reduced = {_normalize(pt.reduce(p, i_p), p) for pt in pts}
    if len(reduced) != len(pts):
        raise AssertionError(f"singular points collide mod {p}")
    return len(pts)


# --- the resolution S ------------------------------------------------------

def model_resolved_count(p: int, hypothesis: str = "permutation",
                         surface_count: int | None = None) -> int:
    """Predicted #S(F_p) for the minimal resolution.

    ``permutation``: each F_p-rational node becomes a line (net +p).
    ``paper``: add the trace 24p + 24*chi_{-4}(p)*p of the exceptional
    summand as literally stated for the resolved surface.
    """
    p = check_odd_prime(p)
    base = count_surface_fast(p).count if surface_count is None else surface_count
    if hypothesis == "permutation":
        return base + p * count_singular(p)
    if hypothesis == "paper":
        return base + 24 * p + 24 * chi_m4(p) * p
    raise ValueError(f"unknown exceptional hypothesis {hypothesis!r}")


# --- elliptic curves -------------------------------------------------------

def count_elliptic(curve: VarietyId | str, p: int) -> int:
    """Trace of Frobenius p + 1 - #E(F_p) for E32 or E64."""
    p = check_odd_prime(p)
    curve = VarietyId(curve)
    sign = {VarietyId.E32: -1, VarietyId.E64: 1}[curve]
    sc = prime_context(p).sqrt_table
    x = np.arange(p, dtype=np.int64)
    rhs = (x * x % p * x + sign * x) % p
    n_points = 1 + int(sc[rhs].sum())
    return p + 1 - n_points


def count(variety: VarietyId | str, p: int, degree: int = 1, brute: bool = False) -> CountRecord:
    """Dispatch used by the CLI and the cache layer."""
    variety = VarietyId(variety)
    if variety is VarietyId.CUBOID_SURFACE:
        if degree != 1:
            raise ValueError("surface counts are over F_p only")
        return count_surface_brute(p) if brute else count_surface_fast(p)
    if variety is VarietyId.CURVE_X:
        return count_curve_X_brute(p, degree) if brute else count_curve_X(p, degree)
    if variety is VarietyId.SINGULAR_LOCUS:
        if degree != 1:
            raise ValueError("singular-locus counts are over F_p only")
        return CountRecord(variety, p, 1, count_singular(p), "brute" if brute else "fast")
    if degree != 1:
        raise ValueError("elliptic counts are over F_p only")
    return CountRecord(variety, p, 1, p + 1 - count_elliptic(variety, p), "fast")


assert EXTENSION_PMAX >= CURVE_DEGREE2_PMAX

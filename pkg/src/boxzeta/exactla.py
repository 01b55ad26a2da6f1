"""Exact solution of overdetermined integer systems by Bareiss elimination."""
from __future__ import annotations

from fractions import Fraction


class FitError(ArithmeticError):
    pass


class RankDeficient(FitError):
    pass


class Inconsistent(FitError):
    pass


def bareiss_echelon(rows: list[list[int]], ncols: int) -> tuple[list[list[int]], int]:
    """Fraction-free row echelon form of an integer matrix.

    Eliminates the first ``ncols`` columns (the remaining ones, e.g. a
    right-hand side, are carried along).  Every intermediate entry is an
    integer minor of the input.  Returns (matrix, rank of the first ncols
    columns); stops at the first column without a pivot.
    """
    m = [list(map(int, r)) for r in rows]
    nrows = len(m)
    width = len(m[0]) if m else 0
    prev = 1
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            return m, r
        m[r], m[piv] = m[piv], m[r]
        pivot = m[r][c]
        for i in range(r + 1, nrows):
            lead = m[i][c]
            for j in range(c + 1, width):
                num = pivot * m[i][j] - lead * m[r][j]
                assert num % prev == 0
                m[i][j] = num // prev
            m[i][c] = 0
        prev = pivot
        r += 1
    return m, r


def solve_exact(A: list[list[int]], b: list[int]) -> list[Fraction]:
    """The unique x with A x = b for a tall integer matrix of full column rank.

    Raises RankDeficient if A has dependent columns and Inconsistent if no
    exact solution exists.
    """
    if len(A) != len(b):
        raise ValueError("row count mismatch")
    if not A:
        raise RankDeficient("empty system")
    n = len(A[0])
    if len(A) < n:
        raise RankDeficient(f"{len(A)} equations for {n} unknowns")
    aug = [list(row) + [rhs] for row, rhs in zip(A, b)]
    m, rank = bareiss_echelon(aug, n)
    if rank < n:
        raise RankDeficient(f"design matrix has rank {rank} < {n}")
    leftover = [row[n] for row in m[n:] if row[n] != 0]
    if leftover:
        raise Inconsistent(f"{len(leftover)} equations are not satisfied by any exact solution")
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = Fraction(m[i][n]) - sum(m[i][j] * x[j] for j in range(i + 1, n))
        x[i] = s / m[i][i]
    return x


def matrix_rank(A: list[list[int]]) -> int:
    """Rank over Q (column pivots may be skipped)."""
    m = [[Fraction(v) for v in row] for row in A]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(rank + 1, len(m)):
            f = m[i][c] / m[rank][c]
            if f:
                for j in range(c, ncols):
                    m[i][j] -= f * m[rank][j]
        rank += 1
    return rank

"""Exact Gaussian elimination over Fraction."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)


def row_echelon(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction] | None = None):
    """Reduced row echelon form.

    Returns ``(rows, rhs, pivots)`` where ``pivots[r]`` is the pivot column of row ``r``.
    Zero rows are kept at the bottom so ``rhs`` can be inspected for consistency.
    """
    m = [list(map(Fraction, r)) for r in matrix]
    t = list(map(Fraction, rhs)) if rhs is not None else None
    n_cols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        if t is not None:
            t[r], t[pivot] = t[pivot], t[r]
        p = m[r][c]
        if p != 1:
            m[r] = [v / p for v in m[r]]
            if t is not None:
                t[r] /= p
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
                if t is not None:
                    t[i] -= factor * t[r]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, t, pivots


def rank(matrix: Sequence[Sequence[Fraction]]) -> int:
    if not matrix:
        return 0
    return len(row_echelon(matrix)[2])


def solve(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction], n: int) -> list | None:
    """One solution of ``matrix x = rhs`` with free variables at zero, or None if inconsistent."""
    if not matrix:
        return [ZERO] * n
    m, t, pivots = row_echelon(matrix, rhs)
    for i in range(len(pivots), len(m)):
        if t[i] != 0:
            return None
    x = [ZERO] * n
    for r, c in enumerate(pivots):
        x[c] = t[r]
    return x

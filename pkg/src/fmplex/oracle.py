"""Brute-force satisfiability by enumerating basic solutions.

Independent of every elimination engine: it only uses exact Gaussian
elimination. A non-empty polyhedron ``{x | A x <= b}`` has a minimal face
``{x | A_I x = b_I}`` with ``rank A_I = rank A``; every point of that affine
subspace is feasible, so checking one solution per full-rank subset decides
feasibility exactly.

Strict rows are handled with an extra column ``delta``: the system is
satisfiable iff ``max delta`` over the rows plus ``delta <= 1`` is positive,
or the rows admit ``delta >= 1``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

from .core import ONE, ZERO, LinearConstraint, Relation, Sat, Unsat, eval_term
from .linalg import rank, solve

MAX_SUBSETS = 250_000


def _feasible_points(rows: Sequence[tuple], n: int):
    """Yield one point per feasible minimal face candidate (basic solution)."""
    if any(len(c) != n for c, _ in rows):
        raise ValueError("row length does not match variable count")
    matrix = [list(c) for c, _ in rows]
    r = rank(matrix) if matrix else 0
    if r == 0:
        if all(b >= 0 for _, b in rows):
            yield [ZERO] * n
        return
    if comb(len(rows), r) > MAX_SUBSETS:
        raise ValueError(f"oracle size guard: {len(rows)} rows of rank {r}")
    for subset in combinations(range(len(rows)), r):
        sub = [matrix[i] for i in subset]
        if rank(sub) != r:
            continue
        x = solve(sub, [rows[i][1] for i in subset], n)
        if x is None:
            continue
        if all(eval_term(c, dict(enumerate(x))) <= b for c, b in rows):
            yield x


def feasible_point(rows: Sequence[tuple], n: int) -> list | None:
    """A point satisfying all weak rows, or None."""
    return next(_feasible_points(rows, n), None)


def enumerate_basic_solutions(rows: Sequence[tuple], n: int | None = None, delta: int | None = None):
    """Decide ``rows`` (weak, ``coeffs . x <= rhs``) with the side condition ``delta > 0``.

    Returns ``Sat(model)`` with a model over all columns (delta included) or
    ``Unsat(frozenset())``; the oracle does not compute cores.
    """
    rows = [(tuple(Fraction(c) for c in cs), Fraction(b)) for cs, b in rows]
    if n is None:
        if not rows:
            return Sat({})
        n = len(rows[0][0])
    if delta is None:
        x = feasible_point(rows, n)
        return Sat(dict(enumerate(x))) if x is not None else Unsat(frozenset())
    unit = tuple(ONE if k == delta else ZERO for k in range(n))
    best = None
    for x in _feasible_points(rows + [(unit, ONE)], n):
        if best is None or x[delta] > best[delta]:
            best = x
    if best is not None and best[delta] > 0:
        return Sat(dict(enumerate(best)))
    x = feasible_point(rows + [(tuple(-u for u in unit), -ONE)], n)
    if x is not None:
        return Sat(dict(enumerate(x)))
    return Unsat(frozenset())


def is_sat(rows: Sequence[tuple], n: int | None = None, delta: int | None = None) -> bool:
    return isinstance(enumerate_basic_solutions(rows, n, delta), Sat)


def _expand(constraints: Sequence[LinearConstraint], n: int):
    """Weak rows plus a delta column (index ``n``) for strict ones; NEQ must be gone."""
    rows = []
    strict = False
    for c in constraints:
        coeffs = tuple(c.coeffs) + (ZERO,)
        if c.relation is Relation.LEQ:
            rows.append((coeffs, c.rhs))
        elif c.relation is Relation.EQ:
            rows.append((coeffs, c.rhs))
            rows.append((tuple(-a for a in coeffs), -c.rhs))
        elif c.relation is Relation.LT:
            rows.append((tuple(c.coeffs) + (ONE,), c.rhs))
            strict = True
        else:
            raise ValueError("disequalities must be split first")
    if not strict:
        return [(cs[:-1], b) for cs, b in rows], n, None
    return rows, n + 1, n


def check_constraints(constraints: Sequence[LinearConstraint], n: int):
    """Decide a list of constraints with any relation; NEQ rows are split into both strict sides."""
    neq = [k for k, c in enumerate(constraints) if c.relation is Relation.NEQ]
    if not neq:
        rows, width, delta = _expand(constraints, n)
        out = enumerate_basic_solutions(rows, width, delta)
        if isinstance(out, Sat):
            return Sat({k: v for k, v in out.model.items() if k < n})
        return out
    k = neq[0]
    c = constraints[k]
    for side in (c, c.negated_sides()):
        branch = list(constraints)
        branch[k] = LinearConstraint(side.coeffs, Relation.LT, side.rhs)
        out = check_constraints(branch, n)
        if isinstance(out, Sat):
            return out
    return Unsat(frozenset())

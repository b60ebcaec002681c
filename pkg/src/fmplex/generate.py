"""Reproducible instance generators."""

from __future__ import annotations

import random
from fractions import Fraction

from .core import LinearConstraint, Relation
from .parser import ELIMINATE, ProblemInstance


def worstcase_instance(n: int) -> ProblemInstance:
    """Rows ``-x_j - x_{n+1} <= 0``, ``-x_j - 2x_{n+1} <= 0`` for each j, and ``x_1 + ... + x_{n+1} <= -1``.

    The goal eliminates ``x_1..x_n`` in order.
    """
    if n < 1:
        raise ValueError("n must be positive")
    width = n + 1
    rows = []
    for factor in (1, 2):
        for j in range(n):
            coeffs = [0] * width
            coeffs[j] = -1
            coeffs[n] = -factor
            rows.append(LinearConstraint(tuple(coeffs), Relation.LEQ, 0))
    rows.append(LinearConstraint((1,) * width, Relation.LEQ, -1))
    names = [f"x{k + 1}" for k in range(width)]
    return ProblemInstance(names, rows, ELIMINATE, list(range(n)))


def random_rows(m: int, n: int, coeff_range: int, rng: random.Random, sat: bool) -> list:
    """``m`` integer rows over ``n`` variables; satisfiable iff ``sat``.

    A satisfiable system gets a hidden integer point ``p`` and right-hand sides
    ``a.p + slack``. An unsatisfiable one is built the same way and then gets a
    last row that contradicts a positive combination of 1-3 earlier rows, so
    the contradiction is certified by construction.
    """
    if m < 1 or n < 1:
        raise ValueError("need at least one row and one variable")
    if not sat and m < 2:
        raise ValueError("an unsatisfiable instance needs two rows")
    r = coeff_range
    point = [rng.randint(-3, 3) for _ in range(n)]
    base = m if sat else m - 1
    rows = []
    for _ in range(base):
        coeffs = [rng.randint(-r, r) for _ in range(n)]
        if not any(coeffs):
            coeffs[rng.randrange(n)] = rng.choice([-1, 1])
        rhs = sum(a * p for a, p in zip(coeffs, point)) + rng.randint(0, 3)
        rows.append((coeffs, rhs))
    if sat:
        return rows
    for _ in range(100):
        picks = rng.sample(range(base), min(base, rng.randint(1, 3)))
        weights = {k: rng.randint(1, 2) for k in picks}
        coeffs = [-sum(w * rows[k][0][j] for k, w in weights.items()) for j in range(n)]
        if all(-r <= c <= r for c in coeffs):
            break
    else:
        k = rng.randrange(base)
        weights = {k: 1}
        coeffs = [-a for a in rows[k][0]]
    rhs = -sum(w * rows[k][1] for k, w in weights.items()) - rng.randint(1, 3)
    rows.append((coeffs, rhs))
    order = list(range(m))
    rng.shuffle(order)
    return [rows[k] for k in order]


def random_instance(m: int, n: int, coeff_range: int = 5, seed: int = 0, sat: bool | None = None) -> ProblemInstance:
    rng = random.Random(seed)
    if sat is None:
        sat = rng.random() < 0.5
    rows = random_rows(m, n, coeff_range, rng, sat)
    constraints = [LinearConstraint(tuple(c), Relation.LEQ, Fraction(b)) for c, b in rows]
    return ProblemInstance([f"x{k + 1}" for k in range(n)], constraints)

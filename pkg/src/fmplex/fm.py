"""Fourier-Motzkin elimination with provenance tracking."""

from __future__ import annotations

import time
from fractions import Fraction
from math import gcd
from typing import Sequence

from .core import (
    ONE,
    ZERO,
    BudgetExceeded,
    Sat,
    SearchStats,
    TrackedSystem,
    Unknown,
    Unsat,
    bound_term,
    choose_delta,
    classify_rows,
    combine,
    delta_bounds,
    delta_leaf_conflicts,
    eval_term,
    is_conflict_row,
    support,
)


def _cross_multipliers(a_up: Fraction, a_lo: Fraction) -> tuple:
    """Smallest positive multipliers ``(p, q)`` with ``p*a_up + q*a_lo = 0``."""
    p, q = -a_lo, a_up
    num = gcd(p.numerator, q.numerator)
    den = p.denominator * q.denominator // gcd(p.denominator, q.denominator)
    g = Fraction(num, den)
    return p / g, q / g


def fm_recipe(system: TrackedSystem, j: int, scaling: str = "unit") -> list:
    cls = classify_rows(system, j)
    recipe = []
    for u in cls.upper:
        a_u = system.rows[u][0][j]
        for lo in cls.lower:
            a_l = system.rows[lo][0][j]
            if scaling == "unit":
                w = (1 / a_u, -1 / a_l)
            elif scaling == "cross":
                w = _cross_multipliers(a_u, a_l)
            else:
                raise ValueError(f"unknown scaling {scaling!r}")
            recipe.append(((u, w[0]), (lo, w[1])))
    recipe.extend(((k, ONE),) for k in cls.none)
    return recipe


def fm_step(system: TrackedSystem, j: int, scaling: str = "unit") -> TrackedSystem:
    """Eliminate ``x_j`` by combining every upper bound with every lower bound.

    ``scaling="unit"`` scales each pair to unit coefficients on ``x_j``;
    ``"cross"`` uses the smallest integral-ratio multipliers instead. Both give
    positive multiples of the same rows.
    """
    if not 0 <= j < system.n or j == system.delta:
        raise ValueError(f"cannot eliminate column {j}")
    recipe = fm_recipe(system, j, scaling)
    rows, f_rows = [], []
    for parts in recipe:
        idx = [k for k, _ in parts]
        w = [m for _, m in parts]
        coeffs = combine([system.rows[k][0] for k in idx], w)
        coeffs = tuple(ZERO if c == j else v for c, v in enumerate(coeffs))
        rows.append((coeffs, sum((m * system.rows[k][1] for k, m in parts), ZERO)))
        f_rows.append(combine([system.f_rows[k] for k in idx], w))
    return TrackedSystem(
        n=system.n,
        rows=tuple(rows),
        f_rows=tuple(f_rows),
        bt_lvl=(0,) * len(rows),
        level=system.level + 1,
        delta=system.delta,
        recipe=tuple(recipe),
        eliminated=j,
        root=system.root,
    )


def _growth(system: TrackedSystem, j: int) -> int:
    cls = classify_rows(system, j)
    return len(cls.lower) * len(cls.upper) + len(cls.none)


def _dedup(system: TrackedSystem) -> TrackedSystem:
    seen, keep = set(), []
    for k, row in enumerate(system.rows):
        if row not in seen:
            seen.add(row)
            keep.append(k)
    if len(keep) == system.m:
        return system
    return TrackedSystem(
        n=system.n,
        rows=tuple(system.rows[k] for k in keep),
        f_rows=tuple(system.f_rows[k] for k in keep),
        bt_lvl=tuple(system.bt_lvl[k] for k in keep),
        level=system.level,
        delta=system.delta,
        eliminated=system.eliminated,
        root=system.root,
    )


def fm_check(
    system: TrackedSystem,
    order: str | Sequence[int] = "min-growth",
    budget: int | None = 10**6,
    timeout: float | None = None,
    dedup: bool = False,
    scaling: str = "unit",
):
    """Decide ``system`` by eliminating every non-delta variable. Returns ``(outcome, stats)``.

    ``order`` is ``"min-growth"`` (fewest resulting rows, lowest index on ties),
    ``"fixed"`` (highest index first), ``"input"`` (lowest index first) or an
    explicit variable list.
    """
    stats = SearchStats(visited_systems=1)
    deadline = None if timeout is None else time.monotonic() + timeout
    history = []
    current = system
    explicit = list(order) if not isinstance(order, str) else None
    try:
        while True:
            for k, (coeffs, rhs) in enumerate(current.rows):
                if is_conflict_row(coeffs, rhs, current.delta):
                    f = current.f_rows[k]
                    return Unsat(support(f), tuple(f)), stats
            live = current.variables()
            if not live:
                break
            if explicit is not None:
                pending = [j for j in explicit if j in live]
                j = pending[0] if pending else live[0]
            elif order == "fixed":
                j = max(live)
            elif order == "input":
                j = min(live)
            elif order == "min-growth":
                j = min(live, key=lambda v: (_growth(current, v), v))
            else:
                raise ValueError(f"unknown order {order!r}")
            history.append((j, current))
            nxt = fm_step(current, j, scaling)
            stats.generated_rows += sum(1 for parts in nxt.recipe if len(parts) > 1)
            stats.visited_systems += 1
            stats.max_depth = nxt.level
            if budget is not None and stats.generated_rows > budget:
                raise BudgetExceeded("budget")
            if deadline is not None and time.monotonic() > deadline:
                raise BudgetExceeded("timeout")
            current = _dedup(nxt) if dedup else nxt
    except BudgetExceeded as exc:
        return Unknown(exc.reason), stats

    if current.delta is not None:
        for c in delta_leaf_conflicts(current):
            return Unsat(support(c.f_row), tuple(c.f_row)), stats
    model = {k: ZERO for k in range(system.n) if k != system.delta}
    if system.delta is not None:
        model[system.delta] = choose_delta(*delta_bounds(current))
    for j, sys_j in reversed(history):
        model[j] = _between_bounds(sys_j, j, model)
    return Sat(model), stats


def _between_bounds(system: TrackedSystem, j: int, model: dict) -> Fraction:
    """Greatest lower bound if any, else least upper bound, else 0."""
    cls = classify_rows(system, j)
    values = []
    for k in cls.lower or cls.upper:
        coeffs, const = bound_term(system.rows[k], j)
        values.append(eval_term(coeffs, model, const))
    if not values:
        return ZERO
    return max(values) if cls.lower else min(values)


def fm_eliminate(system: TrackedSystem, order: Sequence[int], scaling: str = "unit", budget: int | None = None):
    """Project ``order`` away; returns ``(system, generated_rows)``."""
    count = 0
    for j in order:
        system = fm_step(system, j, scaling)
        count += sum(1 for parts in system.recipe if len(parts) > 1)
        if budget is not None and count > budget:
            raise BudgetExceeded("budget")
    return system, count

"""End-to-end solving of problem instances with any engine."""

from __future__ import annotations

import time
from fractions import Fraction
from typing import Sequence

from .core import (
    ZERO,
    LinearConstraint,
    Relation,
    Sat,
    SearchStats,
    TrackedSystem,
    Unknown,
    Unsat,
    combine,
    evaluate,
    support,
)
from .fm import fm_check
from .oracle import enumerate_basic_solutions
from .preprocess import map_core, preprocess, reconstruct_model
from .search import fmplex_sat
from .simplex import simplex_check

ALGORITHMS = ("fm", "fmplex-a", "fmplex-b", "fmplex-c", "simplex", "oracle")


def solve_system(
    system: TrackedSystem,
    algorithm: str = "fmplex-c",
    heuristic="mfo",
    seed: int | None = 0,
    budget: int | None = 10**6,
    timeout: float | None = None,
    **kwargs,
):
    """Run one engine on a weak system. Returns ``(outcome, stats)``."""
    if algorithm == "fm":
        return fm_check(system, budget=budget, timeout=timeout, **kwargs)
    if algorithm in ("fmplex-a", "fmplex-b", "fmplex-c"):
        variant = algorithm[-1].upper()
        return fmplex_sat(system, variant, heuristic, seed, budget=budget, timeout=timeout, **kwargs)
    if algorithm == "simplex":
        return simplex_check(system, budget=budget, timeout=timeout, **kwargs)
    if algorithm == "oracle":
        out = enumerate_basic_solutions(system.rows, system.n, system.delta)
        return out, SearchStats()
    raise ValueError(f"unknown algorithm {algorithm!r}")


def _add_stats(total: SearchStats, part: SearchStats):
    total.generated_rows += part.generated_rows
    total.visited_systems += part.visited_systems
    total.max_depth = max(total.max_depth, part.max_depth)
    total.backjumps += part.backjumps


def solve_constraints(
    constraints: Sequence[LinearConstraint],
    n: int,
    algorithm: str = "fmplex-c",
    heuristic="mfo",
    seed: int | None = 0,
    budget: int | None = 10**6,
    timeout: float | None = None,
    **kwargs,
):
    """Decide constraints with any relations. Returns ``(outcome, stats)``.

    Unsat cores and certificates refer to the given constraint list. With
    disequalities the core is the union over all branches and no single
    certificate exists.
    """
    stats = SearchStats()
    pre = preprocess(constraints, n)
    if pre.conflict is not None:
        g = tuple(pre.conflict)
        total = sum((w * constraints[k].rhs for k, w in enumerate(g)), ZERO)
        if total > 0:
            g = tuple(-w for w in g)
        return Unsat(support(g), g, minimal=len(support(g)) <= 2), stats
    deadline = None if timeout is None else time.monotonic() + timeout
    core = set()
    certificate = None
    branches = 0
    minimal = True
    reason = None
    for branch in pre.branches():
        branches += 1
        left = None if deadline is None else max(deadline - time.monotonic(), 0.0)
        out, part = solve_system(branch.system, algorithm, heuristic, seed, budget, left, **kwargs)
        _add_stats(stats, part)
        if isinstance(out, Sat):
            return Sat(reconstruct_model(out.model, n, pre.substitution)), stats
        if isinstance(out, Unknown):
            reason = reason or out.reason
            continue
        if algorithm == "oracle":
            minimal = False
            core |= set(range(len(constraints)))
            continue
        g = map_core(branch, out.certificate) if out.certificate is not None else None
        if g is not None:
            core |= support(g)
            certificate = g
        else:
            for k in out.core:
                core |= support(branch.provenance[k])
        minimal = minimal and out.minimal
    if reason is not None:
        return Unknown(reason), stats
    substituted = any(constraints[k].relation is Relation.EQ for k in core)
    if branches > 1:
        certificate = None
    return Unsat(frozenset(core), certificate, minimal and branches == 1 and not substituted), stats


def check_model(constraints: Sequence[LinearConstraint], model: dict) -> bool:
    return all(evaluate(model, c) for c in constraints)


def check_instance_certificate(constraints: Sequence[LinearConstraint], g: Sequence[Fraction]) -> bool:
    """``g`` proves the constraints contradictory.

    Equalities may take either sign; ``<=`` and ``<`` need ``g >= 0``. The sum
    must cancel every variable and give ``0 <= s`` with ``s < 0``, or ``0 < 0``
    when some strict row has positive weight. Disequalities are not supported.
    """
    if len(g) != len(constraints):
        raise ValueError("certificate length does not match the constraint count")
    strict = False
    for w, c in zip(g, constraints):
        if w == 0:
            continue
        if c.relation is Relation.NEQ:
            return False
        if c.relation in (Relation.LEQ, Relation.LT) and w < 0:
            return False
        if c.relation is Relation.LT:
            strict = True
    if not constraints:
        return False
    lhs = combine([c.coeffs for c in constraints], g)
    if any(v != 0 for v in lhs):
        return False
    s = sum((w * c.rhs for w, c in zip(g, constraints)), ZERO)
    return s < 0 or (s == 0 and strict)


def check_core(constraints: Sequence[LinearConstraint], core, n: int) -> bool:
    """The core rows alone are unsatisfiable according to the oracle."""
    from .oracle import check_constraints

    sub = [constraints[k] for k in sorted(core)]
    return isinstance(check_constraints(sub, n), Unsat)

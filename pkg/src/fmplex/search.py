"""Depth-first FMplex satisfiability search.

Three variants share one recursion:

* ``A`` explores every restricted projection of the chosen split.
* ``B`` additionally ignores rows whose origin was already designated by a
  failed sibling, so no non-basis is visited twice.
* ``C`` additionally backjumps on local conflicts using per-row backtrack
  levels; its unsat answers at the root may come without a global conflict.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable, Sequence

from .core import (
    ZERO,
    BudgetExceeded,
    PartialUnsat,
    Sat,
    SearchStats,
    TrackedSystem,
    Unknown,
    Unsat,
    bound_term,
    check_farkas_certificate,
    choose_delta,
    classify_rows,
    delta_bounds,
    delta_leaf_conflicts,
    eval_term,
    is_conflict_row,
    is_nonnegative,
    support,
)
from .fmplex import NONE_BOUNDED, apply_recipe, generated_count, projection_recipe

VARIANTS = ("A", "B", "C")
HEURISTICS = ("mfo", "mcl", "rand", "input")


@dataclass(frozen=True)
class BranchChoice:
    variable: int
    candidates: tuple  # row indices, or (NONE_BOUNDED,)
    side: str  # "lower", "upper" or "none"

    @property
    def unbounded(self) -> bool:
        return self.side == "none"


@dataclass(frozen=True)
class TraceEntry:
    level: int
    variable: int | None
    designated_origin: int | None
    non_basis: frozenset
    rows: int
    result: str = ""

    def __str__(self) -> str:
        if self.variable is None:
            step = "root"
        elif self.designated_origin is None:
            step = f"elim x{self.variable + 1} unbounded"
        else:
            step = f"elim x{self.variable + 1} by c{self.designated_origin + 1}"
        nb = "{" + ",".join(str(k + 1) for k in sorted(self.non_basis)) + "}"
        return f"level {self.level}: {step} N={nb} rows={self.rows}"


def branch_choices(system: TrackedSystem, ignored=frozenset()) -> list:
    """Case splits available at ``system``; rows whose origin is ignored are dropped."""
    skip = {k for k, o in enumerate(system.origin) if o in ignored} if ignored else set()
    out = []
    for j in system.variables():
        cls = classify_rows(system, j)
        if cls.lower and cls.upper:
            out.append(BranchChoice(j, tuple(k for k in cls.lower if k not in skip), "lower"))
            out.append(BranchChoice(j, tuple(k for k in cls.upper if k not in skip), "upper"))
        else:
            out.append(BranchChoice(j, (NONE_BOUNDED,), "none"))
    return out


def _nnz(system: TrackedSystem, k: int) -> int:
    coeffs = system.rows[k][0]
    return sum(1 for c, v in enumerate(coeffs) if v != 0 and c != system.delta)


def heuristic_choose(choices: Sequence[BranchChoice], heuristic, system: TrackedSystem, rng=None):
    """Pick a choice and order its candidates. Returns ``(choice, candidates)``."""
    if not choices:
        raise ValueError("no branch choices")
    if callable(heuristic):
        return heuristic(choices, system)
    if heuristic == "mfo":
        choice = min(
            choices,
            key=lambda c: (len(c.candidates), 0 if c.unbounded else 1, c.variable, c.side != "lower"),
        )
        cands = choice.candidates
        if not choice.unbounded:
            cands = tuple(sorted(cands, key=lambda k: (system.bt_lvl[k], k)))
        return choice, cands
    if heuristic == "mcl":
        bottoms = [c for c in choices if c.unbounded]
        if bottoms:
            choice = min(bottoms, key=lambda c: c.variable)
            return choice, choice.candidates

        def key(c):
            cls = classify_rows(system, c.variable)
            own = len(cls.lower) if c.side == "lower" else len(cls.upper)
            return (len(cls.lower) + len(cls.upper), own, c.variable, c.side != "lower")

        choice = min(choices, key=key)
        return choice, tuple(sorted(choice.candidates, key=lambda k: (_nnz(system, k), k)))
    if heuristic == "rand":
        if rng is None:
            raise ValueError("random heuristic needs a generator")
        choice = choices[rng.randrange(len(choices))]
        cands = list(choice.candidates)
        rng.shuffle(cands)
        return choice, tuple(cands)
    if heuristic == "input":
        # lowest variable first, lower side before upper, rows in index order
        choice = min(choices, key=lambda c: (c.variable, 0 if c.unbounded else 1, c.side != "lower"))
        return choice, tuple(choice.candidates)
    raise ValueError(f"unknown heuristic {heuristic!r}")


def _sat_value(system: TrackedSystem, j: int, i, model: dict) -> object:
    if i != NONE_BOUNDED:
        coeffs, const = bound_term(system.rows[i], j)
        return eval_term(coeffs, model, const)
    cls = classify_rows(system, j)
    values = []
    for k in cls.lower or cls.upper:
        coeffs, const = bound_term(system.rows[k], j)
        values.append(eval_term(coeffs, model, const))
    if not values:
        return ZERO
    return max(values) if cls.lower else min(values)


class _Search:
    def __init__(self, root, variant, heuristic, seed, budget, timeout, trace, on_node):
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant!r}")
        self.root = root
        self.variant = variant
        self.heuristic = heuristic
        self.rng = random.Random(seed)
        self.budget = budget
        self.deadline = None if timeout is None else time.monotonic() + timeout
        self.trace = trace
        self.on_node = on_node
        self.stats = SearchStats()

    def _tick(self):
        if self.budget is not None and self.stats.generated_rows > self.budget:
            raise BudgetExceeded("budget")
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise BudgetExceeded("timeout")

    def _leaf_model(self, system: TrackedSystem) -> dict:
        model = {k: ZERO for k in range(system.n) if k != system.delta}
        if system.delta is not None:
            model[system.delta] = choose_delta(*delta_bounds(system))
        return model

    def _conflicts(self, system: TrackedSystem) -> list:
        """``(f_row, bt)`` for every constant contradiction at this node."""
        if system.is_eliminated() and system.delta is not None:
            return [(c.f_row, c.bt_lvl) for c in delta_leaf_conflicts(system)]
        return [
            (system.f_rows[k], system.bt_lvl[k])
            for k, (coeffs, rhs) in enumerate(system.rows)
            if is_conflict_row(coeffs, rhs, system.delta)
        ]

    def run(self, system: TrackedSystem, ignored: frozenset, step_origin=None):
        self.stats.visited_systems += 1
        self.stats.max_depth = max(self.stats.max_depth, system.level)
        self._tick()
        if self.on_node is not None:
            self.on_node(system, ignored)
        lvl = system.level
        conflicts = self._conflicts(system)
        for f_row, _ in conflicts:
            if is_nonnegative(f_row):
                self._log(system, step_origin, "unsat")
                return Unsat(support(f_row), tuple(f_row))
        if conflicts:
            self._log(system, step_origin, "local conflict")
            if self.variant == "C":
                f_row, bt = min(conflicts, key=lambda c: c[1])
                return PartialUnsat(bt - 1, support(f_row))
            return PartialUnsat(max(lvl - 1, 0))
        if system.is_eliminated():
            self._log(system, step_origin, "sat")
            return Sat(self._leaf_model(system))
        self._log(system, step_origin, "")

        use_ignored = ignored if self.variant in ("B", "C") else frozenset()
        choice, cands = heuristic_choose(branch_choices(system, use_ignored), self.heuristic, system, self.rng)
        j = choice.variable
        collected = set()
        for i in cands:
            recipe = projection_recipe(system, j, i)
            self.stats.generated_rows += generated_count(recipe)
            self._tick()
            child = apply_recipe(system, j, i, recipe)
            out = self.run(child, ignored, None if i == NONE_BOUNDED else system.origin[i])
            if isinstance(out, Sat):
                model = dict(out.model)
                model[j] = _sat_value(system, j, i, model)
                return Sat(model)
            if isinstance(out, Unsat):
                return out
            if self.variant == "C":
                if out.level < lvl:
                    self.stats.backjumps += 1
                    return out
                collected |= out.core
            if i != NONE_BOUNDED and self.variant in ("B", "C"):
                ignored = ignored | {system.origin[i]}
        if self.variant == "C" and lvl == 0:
            return Unsat(frozenset(collected), None, minimal=False)
        return PartialUnsat(max(lvl - 1, 0), frozenset(collected))

    def _log(self, system: TrackedSystem, origin, result: str):
        if self.trace is not None:
            self.trace.append(
                TraceEntry(system.level, system.eliminated, origin, system.non_basis, system.m, result)
            )


def fmplex_sat(
    system: TrackedSystem,
    variant: str = "C",
    heuristic: str | Callable = "mfo",
    seed: int | None = 0,
    budget: int | None = 10**6,
    timeout: float | None = None,
    trace: list | None = None,
    on_node: Callable | None = None,
):
    """Decide ``system``. Returns ``(outcome, stats)``.

    ``outcome`` is ``Sat`` (model over all columns, delta included),
    ``Unsat`` (core over the root rows and a Farkas certificate), or
    ``Unknown`` when the budget or timeout is hit. A non-root system is
    searched as a root of its own, so cores refer to its rows.
    """
    if system.level or system.root != system.rows:
        # a node of an earlier run: its provenance points elsewhere, start afresh
        system = TrackedSystem.initial(system.rows, system.n, system.delta)
    search = _Search(system, variant, heuristic, seed, budget, timeout, trace, on_node)
    try:
        out = search.run(system, frozenset())
    except BudgetExceeded as exc:
        return Unknown(exc.reason), search.stats
    if isinstance(out, PartialUnsat):
        raise AssertionError("search ended without a global conflict")
    if isinstance(out, Unsat) and out.certificate is None:
        out = Unsat(out.core, certify_core(system, out.core), minimal=False)
    return out, search.stats


def certify_core(system: TrackedSystem, core) -> tuple | None:
    """Farkas certificate over the root rows whose support lies in ``core`` if possible.

    Re-solves the subsystem with the pruning variant, which always ends in a
    global conflict; falls back to the whole system.
    """
    for rows in (sorted(core), list(range(system.m_root))):
        sub = TrackedSystem.initial([system.root[k] for k in rows], system.n, system.delta)
        out, _ = fmplex_sat(sub, "B", "mfo", budget=None)
        if isinstance(out, Unsat):
            f = [ZERO] * system.m_root
            for pos, k in enumerate(rows):
                f[k] = out.certificate[pos]
            if check_farkas_certificate(f, system):
                return tuple(f)
    return None

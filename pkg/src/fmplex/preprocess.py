"""Reduce mixed constraints (<=, <, =, !=) to weak systems the engines accept.

Order of work: equalities are eliminated by substitution, each disequality is
split into its two strict sides, and strict rows get a ``delta`` column.
Every produced row carries a provenance vector over the instance rows so that
cores and certificates can be mapped back.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

from .core import ONE, ZERO, LinearConstraint, Relation, TrackedSystem, eval_term, support


@dataclass(frozen=True)
class Substitution:
    """``x_var = const + coeffs . x``, taken from instance equality ``source``."""

    var: int
    coeffs: tuple
    const: Fraction
    source: int


@dataclass(frozen=True)
class GaussResult:
    constraints: tuple  # (LinearConstraint, provenance) pairs, equalities removed
    substitution: tuple  # Substitution entries in elimination order
    conflict: tuple | None = None  # provenance of a contradictory constant equality


@dataclass
class Branch:
    system: TrackedSystem
    provenance: tuple  # one vector over instance rows per system row
    delta: int | None


@dataclass
class Preprocessed:
    n: int
    substitution: tuple
    delta: int | None
    constraints: tuple  # (LinearConstraint, provenance) after substitution
    conflict: tuple | None = None

    def branches(self) -> Iterator[Branch]:
        yield from (delta_branch(cs, self.n) for cs in split_disequalities(self.constraints))

    @property
    def branch_count(self) -> int:
        return 2 ** sum(1 for c, _ in self.constraints if c.relation is Relation.NEQ)


def _unit(k: int, m: int) -> tuple:
    return tuple(ONE if i == k else ZERO for i in range(m))


def _axpy(a: Fraction, x: Sequence[Fraction], y: Sequence[Fraction]) -> tuple:
    return tuple(yi + a * xi for xi, yi in zip(x, y))


def gauss_eliminate_equalities(constraints: Sequence[LinearConstraint], n: int | None = None) -> GaussResult:
    """Solve equalities in input order for their lowest-index variable and substitute forward."""
    m = len(constraints)
    work = [(k, c, _unit(k, m)) for k, c in enumerate(constraints)]
    subs = []
    k = 0
    while k < len(work):
        source, c, prov = work[k]
        if c.relation is not Relation.EQ:
            k += 1
            continue
        pivot = next((j for j, a in enumerate(c.coeffs) if a != 0), None)
        del work[k]
        if pivot is None:
            if c.rhs != 0:
                return GaussResult(tuple((d, p) for _, d, p in work), tuple(subs), prov)
            continue
        a = c.coeffs[pivot]
        term = tuple(ZERO if j == pivot else -v / a for j, v in enumerate(c.coeffs))
        subs.append(Substitution(pivot, term, c.rhs / a, source))
        for idx in range(len(work)):
            i, d, dprov = work[idx]
            factor = d.coeffs[pivot]
            if factor == 0:
                continue
            r = -factor / a
            coeffs = _axpy(r, c.coeffs, d.coeffs)
            coeffs = tuple(ZERO if j == pivot else v for j, v in enumerate(coeffs))
            work[idx] = (i, LinearConstraint(coeffs, d.relation, d.rhs + r * c.rhs), _axpy(r, prov, dprov))
    return GaussResult(tuple((d, p) for _, d, p in work), tuple(subs))


def split_disequalities(constraints: Sequence[tuple]) -> Iterator[list]:
    """Lazily yield every choice of ``<`` or ``>`` side for each disequality, ``<`` first."""
    neq = [k for k, (c, _) in enumerate(constraints) if c.relation is Relation.NEQ]
    for sides in product((0, 1), repeat=len(neq)):
        branch = list(constraints)
        for k, side in zip(neq, sides):
            c, prov = branch[k]
            if side:
                c, prov = c.negated_sides(), tuple(-v for v in prov)
            branch[k] = (LinearConstraint(c.coeffs, Relation.LT, c.rhs), prov)
        yield branch


def delta_transform(constraints: Sequence[LinearConstraint]) -> tuple:
    """``a.x < b`` becomes ``a.x + delta <= b`` with delta as a new last column.

    Returns ``(rows, delta)`` where ``delta`` is ``None`` when nothing was strict.
    """
    if any(c.relation not in (Relation.LEQ, Relation.LT) for c in constraints):
        raise ValueError("only <= and < constraints can be transformed")
    if not any(c.relation is Relation.LT for c in constraints):
        return [(c.coeffs, c.rhs) for c in constraints], None
    n = len(constraints[0].coeffs)
    rows = [
        (tuple(c.coeffs) + ((ONE,) if c.relation is Relation.LT else (ZERO,)), c.rhs)
        for c in constraints
    ]
    return rows, n


def delta_branch(constraints: Sequence[tuple], n: int) -> Branch:
    rows, delta = delta_transform([c for c, _ in constraints]) if constraints else ([], None)
    width = n + 1 if delta is not None else n
    return Branch(TrackedSystem.initial(rows, width, delta), tuple(p for _, p in constraints), delta)


def preprocess(constraints: Sequence[LinearConstraint], n: int) -> Preprocessed:
    g = gauss_eliminate_equalities(constraints, n)
    has_strict = any(c.relation in (Relation.LT, Relation.NEQ) for c, _ in g.constraints)
    return Preprocessed(n, g.substitution, n if has_strict else None, g.constraints, g.conflict)


def map_core(branch: Branch, f: Sequence[Fraction]) -> tuple:
    """Instance-row combination ``sum_k f_k * provenance_k``."""
    m = len(branch.provenance[0]) if branch.provenance else 0
    g = [ZERO] * m
    for w, prov in zip(f, branch.provenance):
        if w:
            for i, v in enumerate(prov):
                if v:
                    g[i] += w * v
    return tuple(g)


def reconstruct_model(model: dict, n: int, substitution: Sequence[Substitution]) -> dict:
    """Drop delta, default missing variables to 0 and undo substitutions last to first."""
    out = {j: model.get(j, ZERO) for j in range(n)}
    for s in reversed(substitution):
        out[s.var] = eval_term(s.coeffs, out, s.const)
    return out


def conflict_core(prov: Sequence[Fraction]) -> frozenset:
    return support(prov)

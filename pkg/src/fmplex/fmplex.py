"""Restricted projections and FMplex quantifier elimination."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Sequence

from .core import (
    ONE,
    ZERO,
    BudgetExceeded,
    TrackedSystem,
    bound_term,
    classify_rows,
    combine,
    fmt_rational,
)

NONE_BOUNDED = "none"  # marker for a step without a designated bound


def _lower_upper_nonempty(cls) -> bool:
    return bool(cls.lower) and bool(cls.upper)


def projection_recipe(system: TrackedSystem, j: int, i) -> list:
    """Rows of the projection matrix as ``((parent_row, multiplier), ...)`` tuples.

    Order: combinations with the other lower bounds, then with the upper
    bounds, then the rows without ``x_j``, each ascending by parent row.
    """
    cls = classify_rows(system, j)
    if i is None or i == NONE_BOUNDED:
        if _lower_upper_nonempty(cls):
            raise ValueError(f"x{j + 1} has lower and upper bounds; a designated row is required")
        return [((k, ONE),) for k in cls.none]
    if not _lower_upper_nonempty(cls):
        raise ValueError(f"x{j + 1} is bounded on one side only; use the unbounded step")
    if i not in cls.lower and i not in cls.upper:
        raise ValueError(f"row {i} does not bound x{j + 1}")
    a_i = system.rows[i][0][j]
    recipe = []
    for k in cls.lower:
        if k != i:
            recipe.append(((i, 1 / a_i), (k, -1 / system.rows[k][0][j])))
    for k in cls.upper:
        if k != i:
            recipe.append(((i, -1 / a_i), (k, 1 / system.rows[k][0][j])))
    for k in cls.none:
        recipe.append(((k, ONE),))
    return recipe


def update_bt_levels(parent: TrackedSystem, recipe: Sequence[tuple]) -> tuple:
    """Backtrack level of every row built by ``recipe`` from ``parent``.

    A lower/upper combination (two positive multipliers) keeps the larger level
    of its parents and a copied row keeps its own; any other combination gets
    the child's depth.
    """
    out = []
    for parts in recipe:
        if all(w > 0 for _, w in parts):
            out.append(max(parent.bt_lvl[k] for k, _ in parts))
        else:
            out.append(parent.level + 1)
    return tuple(out)


def apply_recipe(system: TrackedSystem, j: int, i, recipe: Sequence[tuple]) -> TrackedSystem:
    rows, f_rows, origin = [], [], []
    for parts in recipe:
        idx = [k for k, _ in parts]
        w = [m for _, m in parts]
        coeffs = combine([system.rows[k][0] for k in idx], w)
        coeffs = tuple(ZERO if c == j else v for c, v in enumerate(coeffs))
        rhs = sum((m * system.rows[k][1] for k, m in parts), ZERO)
        rows.append((coeffs, rhs))
        f_rows.append(combine([system.f_rows[k] for k in idx], w))
        # the row that is not the designated one carries the origin
        other = idx[-1]
        origin.append(system.origin[other] if system.origin else other)
    designated = None if i is None or i == NONE_BOUNDED else i
    non_basis = system.non_basis
    if designated is not None and system.origin:
        non_basis = non_basis | {system.origin[designated]}
    return replace(
        system,
        rows=tuple(rows),
        f_rows=tuple(f_rows),
        bt_lvl=update_bt_levels(system, recipe),
        level=system.level + 1,
        non_basis=frozenset(non_basis),
        origin=tuple(origin),
        recipe=tuple(recipe),
        eliminated=j,
        designated=designated,
    )


def restricted_projection(system: TrackedSystem, j: int, i=NONE_BOUNDED) -> TrackedSystem:
    """Sub-problem of eliminating ``x_j`` where row ``i`` is the tightest bound.

    ``i = NONE_BOUNDED`` (or ``None``) keeps only the rows free of ``x_j`` and is
    only allowed when ``x_j`` lacks lower or upper bounds.
    """
    if not 0 <= j < system.n or j == system.delta:
        raise ValueError(f"cannot eliminate column {j}")
    return apply_recipe(system, j, i, projection_recipe(system, j, i))


def generated_count(recipe: Sequence[tuple]) -> int:
    """Rows that are new combinations, as opposed to copies."""
    return sum(1 for parts in recipe if len(parts) > 1)


def elimination_candidates(system: TrackedSystem, j: int, sign: str) -> list:
    """Designated rows for ``fmplex_elim``; ``[NONE_BOUNDED]`` if one side is empty."""
    cls = classify_rows(system, j)
    if not _lower_upper_nonempty(cls):
        return [NONE_BOUNDED]
    if sign == "auto":
        sign = "plus" if len(cls.upper) < len(cls.lower) else "minus"
    if sign in ("minus", "-"):
        return list(cls.lower)
    if sign in ("plus", "+"):
        return list(cls.upper)
    raise ValueError(f"unknown sign {sign!r}")


def fmplex_elim(system: TrackedSystem, j: int, sign: str = "minus") -> list:
    """All restricted projections of one case split on ``x_j``; their disjunction is ``exists x_j``."""
    return [restricted_projection(system, j, i) for i in elimination_candidates(system, j, sign)]


# -- quantifier elimination -----------------------------------------------------


@dataclass
class QeNode:
    system: TrackedSystem
    children: list = field(default_factory=list)

    def leaves(self) -> list:
        if not self.children:
            return [self.system]
        return [leaf for child in self.children for leaf in child.leaves()]


@dataclass
class QeResult:
    root: QeNode
    eliminated: tuple
    generated_rows: int = 0
    variable_names: tuple | None = None

    def disjuncts(self) -> list:
        return self.root.leaves()

    def render(self, names: Sequence[str] | None = None) -> str:
        names = names or self.variable_names
        return render_qe(self.root, names)


def fmplex_qe(
    system: TrackedSystem,
    order: Sequence[int],
    sign: str | Callable = "minus",
    budget: int | None = None,
    collapse_true: bool = False,
) -> QeResult:
    """Eliminate ``order`` from ``system``; the result is a disjunction over the leaves.

    ``sign`` is ``"minus"``, ``"plus"``, ``"auto"`` or a callable
    ``(system, j) -> sign``. With ``collapse_true`` a leaf without rows turns its
    whole subtree into ``true``.
    """
    count = 0

    def expand(node: QeNode, depth: int):
        nonlocal count
        if depth == len(order):
            return
        j = order[depth]
        s = sign(node.system, j) if callable(sign) else sign
        for i in elimination_candidates(node.system, j, s):
            recipe = projection_recipe(node.system, j, i)
            count += generated_count(recipe)
            if budget is not None and count > budget:
                raise BudgetExceeded("budget")
            child = QeNode(apply_recipe(node.system, j, i, recipe))
            node.children.append(child)
            expand(child, depth + 1)
            if collapse_true and _is_true(child):
                node.children = [child]
                return

    root = QeNode(system)
    expand(root, 0)
    return QeResult(root, tuple(order), count)


def _is_true(node: QeNode) -> bool:
    if not node.children:
        return not node.system.rows
    return any(_is_true(c) for c in node.children)


# -- rendering ------------------------------------------------------------------


def var_name(k: int, names: Sequence[str] | None) -> str:
    return names[k] if names and k < len(names) else f"x{k + 1}"


def render_term(coeffs: Sequence[Fraction], const: Fraction, names=None) -> str:
    """``c*x1 - x2 + 3`` style; constant-only terms print as the constant."""
    parts = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        mag = abs(c)
        body = var_name(k, names) if mag == 1 else f"{fmt_rational(mag)}*{var_name(k, names)}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    if const != 0 or not parts:
        if not parts:
            parts.append(fmt_rational(const))
        else:
            parts.append(f"+ {fmt_rational(const)}" if const > 0 else f"- {fmt_rational(-const)}")
    return " ".join(parts)


def render_row(coeffs: Sequence[Fraction], rhs: Fraction, names=None, rel: str = "<=") -> str:
    lhs = render_term(coeffs, ZERO, names) if any(coeffs) else "0"
    return f"{lhs} {rel} {fmt_rational(rhs)}"


def _bound_form(system: TrackedSystem, k: int, parent: TrackedSystem | None, names) -> str | None:
    """``small <= large`` for a constant comparison of two bounds, else None."""
    if parent is None or system.recipe is None or system.eliminated is None:
        return None
    parts = system.recipe[k]
    if len(parts) != 2:
        return None
    j = system.eliminated
    terms = {}
    for r, m in parts:
        coeffs, const = bound_term(parent.rows[r], j)
        if any(coeffs):
            return None
        a = parent.rows[r][0][j]
        terms[r] = (const, m == 1 / a)
    (r1, (v1, big1)), (r2, (v2, _)) = terms.items()
    small, large = (v2, v1) if big1 else (v1, v2)
    return f"{fmt_rational(small)} <= {fmt_rational(large)}"


def render_leaf(system: TrackedSystem, parent: TrackedSystem | None, names=None) -> str:
    if not system.rows:
        return "true"
    items = []
    for k, (coeffs, rhs) in enumerate(system.rows):
        text = _bound_form(system, k, parent, names)
        items.append(text if text is not None else render_row(coeffs, rhs, names))
    return "(" + " and ".join(items) + ")"


def render_qe(root: QeNode, names=None) -> str:
    def go(node: QeNode, parent: TrackedSystem | None, top: bool) -> str:
        if not node.children:
            return render_leaf(node.system, parent, names)
        if len(node.children) == 1:
            return go(node.children[0], node.system, top)
        inner = " or ".join(go(c, node.system, False) for c in node.children)
        return inner if top else f"({inner})"

    return go(root, None, True)


def render_provenance(f_row: Sequence[Fraction], prefix: str = "c") -> str:
    """``c1 - 1/2*c3`` for an F-row over the root rows (1-based labels)."""
    return render_term(f_row, ZERO, [f"{prefix}{k + 1}" for k in range(len(f_row))])

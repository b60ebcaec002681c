"""Exact rational systems of linear constraints and the algebra shared by all engines.

Variables and rows are 0-indexed throughout the library. A system row is a pair
``(coeffs, rhs)`` meaning ``coeffs . x <= rhs``. Rows are dense: an eliminated
variable simply has a zero column.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, NamedTuple, Sequence, Union

Rational = Fraction
ZERO = Fraction(0)
ONE = Fraction(1)

Vector = tuple  # tuple[Fraction, ...]
Row = tuple  # (Vector, Fraction)
Assignment = Mapping[int, Fraction]


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted; use Fraction or str")
    return Fraction(value)


def fmt_rational(q: Fraction) -> str:
    """Exact rendering: ``p`` or ``p/q``, never a decimal."""
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class Relation(enum.Enum):
    LEQ = "<="
    LT = "<"
    EQ = "="
    NEQ = "!="

    @property
    def strict(self) -> bool:
        return self in (Relation.LT, Relation.NEQ)

    def holds(self, lhs: Fraction, rhs: Fraction) -> bool:
        if self is Relation.LEQ:
            return lhs <= rhs
        if self is Relation.LT:
            return lhs < rhs
        if self is Relation.EQ:
            return lhs == rhs
        return lhs != rhs


@dataclass(frozen=True)
class LinearConstraint:
    coeffs: tuple
    relation: Relation
    rhs: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(as_rational(c) for c in self.coeffs))
        object.__setattr__(self, "rhs", as_rational(self.rhs))

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def negated_sides(self) -> LinearConstraint:
        return LinearConstraint(tuple(-c for c in self.coeffs), self.relation, -self.rhs)

    def padded(self, n: int) -> LinearConstraint:
        if n < self.n:
            raise ValueError("cannot shrink a constraint")
        return LinearConstraint(self.coeffs + (ZERO,) * (n - self.n), self.relation, self.rhs)


class IndexClassification(NamedTuple):
    lower: tuple
    upper: tuple
    none: tuple


@dataclass(frozen=True)
class TrackedSystem:
    """A weak system ``A x <= b`` together with its provenance over the root system.

    ``f_rows[k]`` is the row of F: row ``k`` equals ``f_rows[k]`` times the root
    rows. ``origin`` is the injective map B from rows to root rows outside the
    non-basis. ``recipe[k]`` records how row ``k`` was built from the parent
    system as ``((parent_row, multiplier), ...)``; it is ``None`` for a root.
    ``eliminated`` and ``designated`` name the step that produced the system
    (``designated`` is ``None`` for a step without a designated bound).
    """

    n: int
    rows: tuple
    f_rows: tuple
    bt_lvl: tuple
    level: int = 0
    non_basis: frozenset = frozenset()
    origin: tuple = ()
    ignored: frozenset = frozenset()
    delta: int | None = None
    recipe: tuple | None = None
    eliminated: int | None = None
    designated: int | None = None
    root: tuple = field(default=(), repr=False, compare=False)

    @classmethod
    def initial(cls, rows: Sequence[Row], n: int | None = None, delta: int | None = None) -> TrackedSystem:
        rows = tuple(
            (tuple(as_rational(c) for c in coeffs), as_rational(rhs)) for coeffs, rhs in rows
        )
        if n is None:
            if not rows:
                raise ValueError("variable count needed for an empty system")
            n = len(rows[0][0])
        for coeffs, _ in rows:
            if len(coeffs) != n:
                raise ValueError(f"row has {len(coeffs)} coefficients, expected {n}")
        if delta is not None and not 0 <= delta < n:
            raise ValueError("delta column out of range")
        m = len(rows)
        identity = tuple(tuple(ONE if i == k else ZERO for i in range(m)) for k in range(m))
        return cls(
            n=n,
            rows=rows,
            f_rows=identity,
            bt_lvl=(0,) * m,
            origin=tuple(range(m)),
            delta=delta,
            root=rows,
        )

    @classmethod
    def from_constraints(cls, constraints: Sequence[LinearConstraint], n: int | None = None) -> TrackedSystem:
        """Weak ``<=`` constraints only; strict rows must go through preprocessing."""
        for c in constraints:
            if c.relation is not Relation.LEQ:
                raise ValueError(f"expected only <= constraints, got {c.relation.value}")
        return cls.initial([(c.coeffs, c.rhs) for c in constraints], n)

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def m_root(self) -> int:
        return len(self.root)

    def variables(self) -> list[int]:
        """Non-delta columns that are not identically zero."""
        return [
            j for j in range(self.n)
            if j != self.delta and any(coeffs[j] != 0 for coeffs, _ in self.rows)
        ]

    def is_eliminated(self) -> bool:
        return not self.variables()

    def with_ignored(self, ignored) -> TrackedSystem:
        return replace(self, ignored=frozenset(ignored))

    def constraints(self) -> list[LinearConstraint]:
        return [LinearConstraint(coeffs, Relation.LEQ, rhs) for coeffs, rhs in self.rows]


def classify_rows(system: TrackedSystem | Sequence[Row], j: int) -> IndexClassification:
    rows = system.rows if isinstance(system, TrackedSystem) else system
    lower, upper, none = [], [], []
    for i, (coeffs, _) in enumerate(rows):
        a = coeffs[j]
        if a < 0:
            lower.append(i)
        elif a > 0:
            upper.append(i)
        else:
            none.append(i)
    return IndexClassification(tuple(lower), tuple(upper), tuple(none))


def _row_parts(row) -> tuple:
    if isinstance(row, LinearConstraint):
        return row.coeffs, row.rhs
    return row


def bound_term(row: LinearConstraint | Row, j: int) -> tuple:
    """Solve the row for ``x_j``: returns ``(coeffs, const)`` with ``x_j = const + coeffs . x``.

    ``coeffs[j]`` is zero in the result.
    """
    coeffs, rhs = _row_parts(row)
    a = coeffs[j]
    if a == 0:
        raise ValueError(f"no bound on variable x{j + 1}")
    term = tuple(ZERO if k == j else -c / a for k, c in enumerate(coeffs))
    return term, rhs / a


def eval_term(coeffs: Sequence[Fraction], assignment: Assignment, const: Fraction = ZERO) -> Fraction:
    total = const
    for k, c in enumerate(coeffs):
        if c != 0:
            try:
                total += c * assignment[k]
            except KeyError:
                raise KeyError(f"variable x{k + 1} is not assigned") from None
    return total


def evaluate(assignment: Assignment, c: LinearConstraint | Row) -> bool:
    if isinstance(c, LinearConstraint):
        return c.relation.holds(eval_term(c.coeffs, assignment), c.rhs)
    coeffs, rhs = c
    return eval_term(coeffs, assignment) <= rhs


def combine(vectors: Sequence[Sequence[Fraction]], weights: Sequence[Fraction]) -> tuple:
    if not vectors:
        return ()
    out = [ZERO] * len(vectors[0])
    for w, vec in zip(weights, vectors):
        if w == 0:
            continue
        for k, v in enumerate(vec):
            if v:
                out[k] += w * v
    return tuple(out)


def check_farkas_certificate(
    f: Sequence[Fraction],
    system: TrackedSystem | Sequence[Row],
    delta: int | None = None,
) -> bool:
    """True iff ``f`` witnesses unsatisfiability of the (root) system.

    Requires ``f >= 0`` and ``f A = 0`` on every non-delta column. Then the derived
    row is ``c*delta <= f b``; it is contradictory if ``c = 0`` and ``f b < 0``, or,
    under the side condition ``delta > 0``, if ``c > 0`` and ``f b <= 0``.
    """
    if isinstance(system, TrackedSystem):
        rows, n = system.root, system.n
        delta = system.delta if delta is None else delta
    else:
        rows = list(system)
        n = len(rows[0][0]) if rows else 0
    if len(f) != len(rows):
        raise ValueError(f"certificate has length {len(f)}, system has {len(rows)} rows")
    f = [as_rational(x) for x in f]
    if any(x < 0 for x in f):
        return False
    lhs = combine([coeffs for coeffs, _ in rows], f) or (ZERO,) * n
    rhs = sum((w * b for w, (_, b) in zip(f, rows)), ZERO)
    for k in range(n):
        if k != delta and lhs[k] != 0:
            return False
    c = lhs[delta] if delta is not None else ZERO
    if c == 0:
        return rhs < 0
    return c > 0 and rhs <= 0


def support(vec: Sequence[Fraction]) -> frozenset:
    return frozenset(k for k, v in enumerate(vec) if v != 0)


def is_nonnegative(vec: Sequence[Fraction]) -> bool:
    return all(v >= 0 for v in vec)


# -- outcomes -----------------------------------------------------------------


@dataclass(frozen=True)
class Sat:
    model: dict


@dataclass(frozen=True)
class Unsat:
    """``core`` holds root row indices; ``certificate`` is a Farkas vector over the root rows."""

    core: frozenset
    certificate: tuple | None = None
    minimal: bool = True


@dataclass(frozen=True)
class PartialUnsat:
    level: int
    core: frozenset = frozenset()


@dataclass(frozen=True)
class Unknown:
    reason: str


SatOutcome = Union[Sat, Unsat, PartialUnsat, Unknown]


@dataclass
class SearchStats:
    generated_rows: int = 0
    visited_systems: int = 0
    max_depth: int = 0
    backjumps: int = 0


class BudgetExceeded(Exception):
    """Raised internally when a search exceeds its row budget or deadline."""

    def __init__(self, reason: str = "budget"):
        super().__init__(reason)
        self.reason = reason


# -- constant rows in delta ------------------------------------------------------


@dataclass(frozen=True)
class DeltaConflict:
    """A derived constant contradiction at a node whose only live column is delta."""

    f_row: tuple
    bt_lvl: int
    rows: tuple  # node rows combined

    @property
    def is_global(self) -> bool:
        return is_nonnegative(self.f_row)


def is_conflict_row(coeffs: Sequence[Fraction], rhs: Fraction, delta: int | None) -> bool:
    """``0 <= rhs`` with ``rhs < 0``, or ``c*delta <= rhs`` with ``c > 0`` and ``rhs <= 0``."""
    for k, a in enumerate(coeffs):
        if a != 0 and k != delta:
            return False
    c = coeffs[delta] if delta is not None else ZERO
    if c == 0:
        return rhs < 0
    return c > 0 and rhs <= 0


def delta_bounds(system: TrackedSystem) -> tuple:
    """Return ``(lo, hi)`` over rows mentioning only delta; ``None`` marks an open side."""
    lo = hi = None
    d = system.delta
    for coeffs, rhs in system.rows:
        c = coeffs[d] if d is not None else ZERO
        if c > 0:
            v = rhs / c
            hi = v if hi is None else min(hi, v)
        elif c < 0:
            v = rhs / c
            lo = v if lo is None else max(lo, v)
    return lo, hi


def choose_delta(lo: Fraction | None, hi: Fraction | None) -> Fraction | None:
    """Pick ``delta > 0`` with ``lo <= delta <= hi``, or ``None`` if impossible."""
    if hi is not None and hi <= 0:
        return None
    if lo is not None and hi is not None and lo > hi:
        return None
    if hi is None:
        return ONE if lo is None or lo <= 1 else lo
    value = min(ONE, hi / 2)
    if lo is None or value >= lo:
        return value
    return (lo + hi) / 2 if lo > 0 else hi


def delta_leaf_conflicts(system: TrackedSystem) -> list:
    """All refutations of a node where every non-delta column is zero.

    Candidates are single rows that are contradictory by themselves and
    lower/upper pairs on delta whose bounds cross. Same-sign pairs are included
    only when their combination is non-negative in F, since only then do they
    prove anything.
    """
    d = system.delta
    out = []
    rows = system.rows
    for k, (coeffs, rhs) in enumerate(rows):
        if is_conflict_row(coeffs, rhs, d):
            out.append(DeltaConflict(system.f_rows[k], system.bt_lvl[k], (k,)))
    if d is None:
        return out
    live = [k for k in range(len(rows)) if rows[k][0][d] != 0]
    for x, p in enumerate(live):
        for q in live[x + 1:]:
            cp, cq = rows[p][0][d], rows[q][0][d]
            if (cp < 0) != (cq < 0):
                lo, up = (p, q) if cp < 0 else (q, p)
                c_lo, c_up = rows[lo][0][d], rows[up][0][d]
                weights = ((up, 1 / c_up), (lo, -1 / c_lo))
                rhs = rows[up][1] / c_up - rows[lo][1] / c_lo
                if rhs >= 0:
                    continue
                f_row = combine([system.f_rows[k] for k, _ in weights], [w for _, w in weights])
                bt = max(system.bt_lvl[lo], system.bt_lvl[up])
                out.append(DeltaConflict(f_row, bt, (lo, up)))
                continue
            rhs = rows[p][1] / cp - rows[q][1] / cq
            if rhs == 0:
                continue
            sign = 1 if rhs < 0 else -1
            f_row = combine([system.f_rows[p], system.f_rows[q]], [sign / cp, -sign / cq])
            if is_nonnegative(f_row):
                out.append(DeltaConflict(f_row, system.level, (p, q)))
    return out

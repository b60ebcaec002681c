"""General simplex in the bound-propagating tableau style.

Every row ``a_i . x + c_i*delta <= b_i`` becomes a slack ``s_i = a_i . x`` with
the upper bound ``b_i - c_i*delta``. Bounds and values are pairs ``(r, k)``
standing for ``r + k*delta`` and compare lexicographically, which is exact for
an infinitesimal ``delta > 0``. The ``x`` variables are unbounded and start
non-basic at 0; the slacks start basic.
"""

from __future__ import annotations

import time
from fractions import Fraction

from .core import (
    ZERO,
    Sat,
    SearchStats,
    TrackedSystem,
    Unknown,
    Unsat,
    choose_delta,
    support,
)


def _add(p, q):
    return (p[0] + q[0], p[1] + q[1])


def _scale(c, p):
    return (c * p[0], c * p[1])


class Tableau:
    """Basic variables as sparse rows over the non-basic ones.

    Variables ``0..n-1`` are the columns of x (delta excluded); ``n + i`` is the
    slack of constraint row ``i``.
    """

    def __init__(self, system: TrackedSystem):
        self.system = system
        n = system.n
        self.n = n
        self.upper = {}
        self.rows = {}
        self.value = {j: (ZERO, ZERO) for j in range(n) if j != system.delta}
        for i, (coeffs, rhs) in enumerate(system.rows):
            s = n + i
            c = coeffs[system.delta] if system.delta is not None else ZERO
            self.upper[s] = (rhs, -c)
            self.rows[s] = {j: a for j, a in enumerate(coeffs) if a != 0 and j != system.delta}
            self.value[s] = (ZERO, ZERO)
        self.nonbasic = set(j for j in range(n) if j != system.delta)

    def column_length(self, var: int) -> int:
        return sum(1 for row in self.rows.values() if var in row)

    def violated(self):
        for s in sorted(self.rows):
            ub = self.upper.get(s)
            if ub is not None and self.value[s] > ub:
                return s
        return None

    def candidates(self, s: int):
        """Non-basic variables that can lower basic ``s``."""
        out = []
        for v, a in self.rows[s].items():
            if v in self.upper:  # slack: may only decrease
                if a > 0:
                    out.append(v)
            elif a != 0:
                out.append(v)
        return out

    def explain(self, s: int) -> list:
        """Farkas row over constraint rows for a basic slack that cannot be lowered."""
        f = [ZERO] * len(self.system.rows)
        f[s - self.n] = Fraction(1)
        for v, a in self.rows[s].items():
            f[v - self.n] -= a
        return f

    def pivot_and_update(self, s: int, e: int):
        """Move ``s`` to its upper bound by changing ``e``, then swap them."""
        a = self.rows[s][e]
        theta = _scale(1 / a, _add(self.upper[s], _scale(-1, self.value[s])))
        self.value[s] = self.upper[s]
        self.value[e] = _add(self.value[e], theta)
        for b, row in self.rows.items():
            if b != s and e in row:
                self.value[b] = _add(self.value[b], _scale(row[e], theta))
        # e = (s - sum_{v != e} row[v] v) / a
        row_s = self.rows.pop(s)
        new_row = {s: 1 / a}
        for v, c in row_s.items():
            if v != e:
                new_row[v] = -c / a
        for b, row in self.rows.items():
            c = row.pop(e, None)
            if c is None:
                continue
            for v, d in new_row.items():
                t = row.get(v, ZERO) + c * d
                if t == 0:
                    row.pop(v, None)
                else:
                    row[v] = t
        self.rows[e] = new_row
        self.nonbasic.discard(e)
        self.nonbasic.add(s)

    def model(self) -> dict:
        """Concrete rational model with a delta small enough for every row."""
        sys = self.system
        x = {j: self.value[j] for j in range(self.n) if j != sys.delta}
        if sys.delta is None:
            return {j: v[0] for j, v in x.items()}
        lo = hi = None
        for coeffs, rhs in sys.rows:
            p = q = ZERO
            for j, a in enumerate(coeffs):
                if j == sys.delta:
                    q += a
                elif a:
                    p += a * x[j][0]
                    q += a * x[j][1]
            # p + q*delta <= rhs
            if q > 0:
                v = (rhs - p) / q
                hi = v if hi is None else min(hi, v)
            elif q < 0:
                v = (rhs - p) / q
                lo = v if lo is None else max(lo, v)
        d = choose_delta(lo, hi)
        model = {j: v[0] + v[1] * d for j, v in x.items()}
        model[sys.delta] = d
        return model


def simplex_check(system: TrackedSystem, pivot_rule: str = "min-column", budget: int | None = None, timeout: float | None = None):
    """Decide ``system``. Returns ``(outcome, stats)``; ``stats.visited_systems`` counts pivots.

    ``pivot_rule="min-column"`` picks the entering variable with the shortest
    column (Bland's smallest index on ties) and switches to pure Bland once a
    basis repeats; ``"bland"`` uses Bland's rule throughout.
    """
    if system.delta is not None and any(c[system.delta] < 0 for c, _ in system.rows):
        raise ValueError("negative delta coefficients are not supported")
    stats = SearchStats()
    deadline = None if timeout is None else time.monotonic() + timeout
    for i, (coeffs, rhs) in enumerate(system.rows):
        if all(a == 0 for j, a in enumerate(coeffs) if j != system.delta):
            c = coeffs[system.delta] if system.delta is not None else ZERO
            if rhs < 0 or (rhs == 0 and c > 0):
                f = tuple(Fraction(1) if k == i else ZERO for k in range(system.m))
                return Unsat(frozenset({i}), f, minimal=True), stats
    tab = Tableau(system)
    bland = pivot_rule == "bland"
    seen = {frozenset(tab.rows)}
    while True:
        s = tab.violated()
        if s is None:
            return Sat(tab.model()), stats
        cands = tab.candidates(s)
        if not cands:
            f = tab.explain(s)
            return Unsat(support(f), tuple(f), minimal=False), stats
        if bland:
            e = min(cands)
        else:
            e = min(cands, key=lambda v: (tab.column_length(v), v))
        tab.pivot_and_update(s, e)
        stats.visited_systems += 1
        if budget is not None and stats.visited_systems > budget:
            return Unknown("budget"), stats
        if deadline is not None and time.monotonic() > deadline:
            return Unknown("timeout"), stats
        basis = frozenset(tab.rows)
        if basis in seen:
            bland = True
        seen.add(basis)

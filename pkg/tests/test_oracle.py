from fractions import Fraction as Q

import pytest

from fmplex import oracle
from fmplex.core import LinearConstraint, Relation, Sat, Unsat, evaluate
from fmplex.linalg import rank, row_echelon, solve
from known_systems import BACKJUMP, STRICT_TRAP, TWO_BY_TWO


def test_rank_and_solve():
    assert rank([[1, 2], [2, 4]]) == 1
    assert rank([[1, 0], [0, 1], [1, 1]]) == 2
    assert solve([[1, 1], [1, -1]], [2, 0], 2) == [Q(1), Q(1)]
    assert solve([[1, 1], [1, 1]], [1, 2], 2) is None
    assert solve([[0, 1]], [3], 2) == [Q(0), Q(3)]  # free variable at 0
    rows, rhs, pivots = row_echelon([[2, 4], [1, 3]], [2, 1])
    assert pivots == [0, 1]


def test_basic_solutions():
    out = oracle.enumerate_basic_solutions(TWO_BY_TWO)
    assert isinstance(out, Sat) and all(evaluate(out.model, r) for r in TWO_BY_TWO)
    assert isinstance(oracle.enumerate_basic_solutions(BACKJUMP), Unsat)


def test_unbounded_direction_without_vertices():
    # a half-plane has no vertex; the lineality space is handled by free variables
    assert oracle.is_sat([((1, 1), 0)])
    assert not oracle.is_sat([((0, 0), -1)])
    assert oracle.is_sat([], 2)


def test_delta_semantics():
    # d <= 1/1000 is fine: d only needs to be positive
    assert oracle.is_sat([((0, 1), Q(1, 1000))], delta=1)
    assert not oracle.is_sat([((1, 1), 0), ((-1, 0), 0)], delta=1)


def test_mixed_relations():
    assert isinstance(oracle.check_constraints(STRICT_TRAP, 2), Sat)
    neq = [LinearConstraint((1,), Relation.NEQ, 0), LinearConstraint((1,), Relation.LEQ, 0), LinearConstraint((-1,), Relation.LEQ, 0)]
    assert isinstance(oracle.check_constraints(neq, 1), Unsat)
    eq = [LinearConstraint((1, 1), Relation.EQ, 2), LinearConstraint((1, -1), Relation.LT, 0)]
    out = oracle.check_constraints(eq, 2)
    assert isinstance(out, Sat) and all(evaluate(out.model, c) for c in eq)


def test_size_guard(monkeypatch):
    monkeypatch.setattr(oracle, "MAX_SUBSETS", 3)
    with pytest.raises(ValueError):
        oracle.enumerate_basic_solutions(BACKJUMP)

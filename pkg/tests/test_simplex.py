from fractions import Fraction as Q

import pytest

from fmplex.core import Sat, TrackedSystem, Unknown, Unsat, check_farkas_certificate, evaluate
from fmplex.simplex import simplex_check
from known_systems import BACKJUMP, REDUNDANT_FM, TWO_BY_TWO, WITH_NONNEG


@pytest.mark.parametrize("rule", ["min-column", "bland"])
@pytest.mark.parametrize("rows", [REDUNDANT_FM, TWO_BY_TWO, WITH_NONNEG])
def test_sat_models_verify(rule, rows):
    s = TrackedSystem.initial(rows)
    out, _ = simplex_check(s, pivot_rule=rule)
    assert isinstance(out, Sat)
    assert all(evaluate(out.model, r) for r in s.rows)


@pytest.mark.parametrize("rule", ["min-column", "bland"])
def test_unsat_certificate(rule):
    s = TrackedSystem.initial(BACKJUMP)
    out, stats = simplex_check(s, pivot_rule=rule)
    assert isinstance(out, Unsat)
    assert check_farkas_certificate(out.certificate, s)
    assert stats.visited_systems >= 1


def test_constant_row_conflict():
    s = TrackedSystem.initial([((0, 0), -1), ((1, 0), 3)])
    out, _ = simplex_check(s)
    assert isinstance(out, Unsat) and out.core == {0}


def test_delta_column():
    s = TrackedSystem.initial([((1, 1), 0), ((-1, 0), 0)], delta=1)
    out, _ = simplex_check(s)
    assert isinstance(out, Unsat) and check_farkas_certificate(out.certificate, s)
    s = TrackedSystem.initial([((1, 1), 1), ((-1, 1), 0)], delta=1)
    out, _ = simplex_check(s)
    assert isinstance(out, Sat) and out.model[1] > 0
    assert all(evaluate(out.model, r) for r in s.rows)


def test_negative_delta_coefficient_rejected():
    with pytest.raises(ValueError):
        simplex_check(TrackedSystem.initial([((1, -1), 0)], delta=1))


def test_budget():
    out, _ = simplex_check(TrackedSystem.initial(BACKJUMP), budget=0)
    assert isinstance(out, Unknown)


def test_degenerate_cycle_prone_system_terminates():
    # many tight rows through the origin
    rows = [((1, -1, 0), 0), ((-1, 1, 0), 0), ((0, 1, -1), 0), ((0, -1, 1), 0), ((1, 1, 1), Q(-1)), ((-1, 0, 0), 0)]
    s = TrackedSystem.initial(rows)
    out, _ = simplex_check(s, pivot_rule="bland")
    assert isinstance(out, Unsat) and check_farkas_certificate(out.certificate, s)

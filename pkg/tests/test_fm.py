import pytest

from fmplex.core import Sat, TrackedSystem, Unknown, Unsat, check_farkas_certificate, evaluate
from fmplex.fm import fm_check, fm_eliminate, fm_step
from fmplex.fmplex import render_provenance
from known_systems import BACKJUMP, REDUNDANT_FM, TWO_BY_TWO


def test_two_steps_cross_scaling():
    s = fm_step(fm_step(TrackedSystem.initial(REDUNDANT_FM), 0, "cross"), 1, "cross")
    assert [(tuple(c), b) for c, b in s.rows] == [((0, 0, 4), 2), ((0, 0, 2), 1), ((0, 0, 2), 1)]
    assert [render_provenance(f) for f in s.f_rows] == ["c1 + c2 + c3 + c4", "c1 + c4", "c2 + c3"]


def test_unit_scaling_gives_same_half_spaces():
    cross = fm_step(TrackedSystem.initial(REDUNDANT_FM), 0, "cross")
    unit = fm_step(TrackedSystem.initial(REDUNDANT_FM), 0, "unit")
    for (c1, b1), (c2, b2) in zip(cross.rows, unit.rows):
        k = next(a / b for a, b in zip(c1, c2) if b != 0)
        assert k > 0 and tuple(k * x for x in c2) == tuple(c1) and k * b2 == b1


def test_provenance_is_conical():
    s = fm_step(TrackedSystem.initial(TWO_BY_TWO), 1)
    assert all(all(w >= 0 for w in f) for f in s.f_rows)
    assert s.m == 4  # 2 lower x 2 upper


@pytest.mark.parametrize("order", ["min-growth", "fixed", "input", [2, 0, 1]])
def test_check_outcomes(order):
    out, _ = fm_check(TrackedSystem.initial(BACKJUMP), order=order)
    assert isinstance(out, Unsat)
    assert check_farkas_certificate(out.certificate, TrackedSystem.initial(BACKJUMP))
    s = TrackedSystem.initial(REDUNDANT_FM)
    out, _ = fm_check(s, order=order)
    assert isinstance(out, Sat) and all(evaluate(out.model, r) for r in s.rows)


def test_dedup_keeps_answer():
    s = TrackedSystem.initial(REDUNDANT_FM)
    out, stats = fm_check(s, order="input", dedup=True, scaling="cross")
    assert isinstance(out, Sat)


def test_eliminate_counts_rows():
    s, count = fm_eliminate(TrackedSystem.initial(REDUNDANT_FM), [0, 1])
    assert count == 5 and s.m == 3  # 4 in the first step, 1 in the second


def test_budget():
    out, _ = fm_check(TrackedSystem.initial(BACKJUMP), order="input", budget=0)
    assert isinstance(out, Unknown)


def test_unknown_order():
    with pytest.raises(ValueError):
        fm_check(TrackedSystem.initial(BACKJUMP), order="sideways")

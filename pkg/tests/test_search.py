from fractions import Fraction as Q

import pytest

from fmplex.core import Sat, TrackedSystem, Unknown, Unsat, check_farkas_certificate, evaluate
from fmplex.fmplex import render_provenance
from fmplex.search import branch_choices, certify_core, fmplex_sat
from known_systems import BACKJUMP, BACKJUMP_SCRIPT, TWO_BY_TWO, WITH_NONNEG, scripted

VARIANTS = ["A", "B", "C"]
HEURISTICS = ["mfo", "mcl", "rand", "input"]


@pytest.mark.parametrize("variant", VARIANTS)
@pytest.mark.parametrize("heuristic", HEURISTICS)
def test_satisfiable_system_gives_verified_model(variant, heuristic):
    s = TrackedSystem.initial(WITH_NONNEG)
    out, stats = fmplex_sat(s, variant, heuristic, seed=7)
    assert isinstance(out, Sat)
    assert all(evaluate(out.model, row) for row in s.rows)
    assert stats.visited_systems >= 1


@pytest.mark.parametrize("variant", VARIANTS)
@pytest.mark.parametrize("heuristic", HEURISTICS)
def test_unsatisfiable_system_gives_certificate(variant, heuristic):
    s = TrackedSystem.initial(BACKJUMP)
    out, _ = fmplex_sat(s, variant, heuristic, seed=3)
    assert isinstance(out, Unsat)
    assert check_farkas_certificate(out.certificate, s)
    assert out.core == {0, 2, 3, 4}


def test_backjumping_run_matches_hand_trace():
    s = TrackedSystem.initial(BACKJUMP)
    nodes, trace = [], []
    out, stats = fmplex_sat(s, "C", scripted(BACKJUMP_SCRIPT), trace=trace, on_node=lambda n, _: nodes.append(n))
    assert isinstance(out, Unsat) and not out.minimal
    assert out.certificate == (1, 0, 1, 2, 1)
    deepest = [n for n in nodes if n.level == 3]
    assert len(deepest) == 1
    conflicts = [
        (render_provenance(f), bt)
        for (c, b), f, bt in zip(deepest[0].rows, deepest[0].f_rows, deepest[0].bt_lvl)
        if not any(c) and b < 0
    ]
    assert conflicts == [("2*c1 - 2*c2 + 2*c4", 3), ("-c1 + 2*c2 + c3 + c5", 1)]
    assert stats.generated_rows == 10 and stats.visited_systems == 6 and stats.backjumps == 3
    assert [str(t) for t in trace][:2] == ["level 0: root N={} rows=5", "level 1: elim x3 by c1 N={1} rows=4"]


def test_certify_core_finds_certificate_inside_core():
    s = TrackedSystem.initial(BACKJUMP)
    f = certify_core(s, frozenset(range(5)))
    assert check_farkas_certificate(f, s)
    assert {k for k, w in enumerate(f) if w} == {0, 2, 3, 4}
    assert certify_core(s, frozenset({0, 1})) is not None  # falls back to all rows


def test_branch_choices_respect_ignored_rows():
    s = TrackedSystem.initial(TWO_BY_TWO)
    choices = {(c.variable, c.side): c.candidates for c in branch_choices(s, frozenset({0}))}
    assert choices[(1, "lower")] == (1,)
    assert choices[(1, "upper")] == (2, 3)
    assert choices[(0, "none")] == ("none",)


def test_budget_gives_unknown():
    out, _ = fmplex_sat(TrackedSystem.initial(BACKJUMP), "A", "mfo", budget=1)
    assert isinstance(out, Unknown) and out.reason == "budget"


def test_random_heuristic_is_seeded():
    s = TrackedSystem.initial(BACKJUMP)
    a = fmplex_sat(s, "A", "rand", seed=11)[1]
    b = fmplex_sat(s, "A", "rand", seed=11)[1]
    assert a == b


def test_delta_column_is_never_eliminated():
    # x + d <= 1, -x + d <= 0 with d the last column: satisfiable for small d
    s = TrackedSystem.initial([((1, 1), 1), ((-1, 1), 0)], delta=1)
    out, _ = fmplex_sat(s, "C")
    assert isinstance(out, Sat) and out.model[1] > 0
    assert all(evaluate(out.model, row) for row in s.rows)


def test_delta_conflict_is_global():
    # x + d <= 0, -x <= 0: forces d <= 0
    s = TrackedSystem.initial([((1, 1), 0), ((-1, 0), 0)], delta=1)
    out, _ = fmplex_sat(s, "C")
    assert isinstance(out, Unsat)
    assert check_farkas_certificate(out.certificate, s)


def test_unknown_variant_rejected():
    with pytest.raises(ValueError):
        fmplex_sat(TrackedSystem.initial(TWO_BY_TWO), "D")

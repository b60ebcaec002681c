from fractions import Fraction as Q

from hypothesis import given, settings
from hypothesis import strategies as st

from fmplex.core import LinearConstraint, Relation, Sat, TrackedSystem, Unsat, check_farkas_certificate, evaluate
from fmplex.fmplex import fmplex_qe
from fmplex.oracle import check_constraints, is_sat
from fmplex.parser import ProblemInstance, emit_instance, parse_plain
from fmplex.search import fmplex_sat
from fmplex.simplex import simplex_check
from fmplex.solver import check_instance_certificate, check_model, solve_constraints

coeff = st.integers(-4, 4)
rational = st.fractions(min_value=-6, max_value=6, max_denominator=4)


@st.composite
def systems(draw, max_n=3, max_m=6):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(1, max_m))
    rows = [(tuple(draw(coeff) for _ in range(n)), draw(rational)) for _ in range(m)]
    return TrackedSystem.initial(rows, n)


@st.composite
def mixed(draw):
    n = draw(st.integers(1, 3))
    rel = st.sampled_from([Relation.LEQ, Relation.LT, Relation.EQ, Relation.NEQ])
    cs = [
        LinearConstraint(tuple(draw(coeff) for _ in range(n)), draw(rel), draw(rational))
        for _ in range(draw(st.integers(1, 5)))
    ]
    return cs, n


@settings(max_examples=150, deadline=None)
@given(systems(), st.sampled_from("ABC"), st.sampled_from(["mfo", "mcl", "rand"]))
def test_search_agrees_with_oracle(system, variant, heuristic):
    out, _ = fmplex_sat(system, variant, heuristic, seed=5)
    assert isinstance(out, Sat) == is_sat(system.rows, system.n)
    if isinstance(out, Sat):
        assert all(evaluate(out.model, r) for r in system.rows)
    else:
        assert check_farkas_certificate(out.certificate, system)


@settings(max_examples=100, deadline=None)
@given(systems())
def test_simplex_agrees_with_oracle(system):
    out, _ = simplex_check(system)
    assert isinstance(out, Sat) == is_sat(system.rows, system.n)


@settings(max_examples=60, deadline=None)
@given(systems(max_n=3, max_m=5), st.integers(0, 2))
def test_qe_disjuncts_union_to_projection(system, j):
    j = j % system.n
    qe = fmplex_qe(system, [j], "auto")
    # a point of a disjunct extends to the system; a solution lies in some disjunct
    for leaf in qe.disjuncts():
        out, _ = fmplex_sat(leaf, "B")
        if isinstance(out, Sat):
            point = {k: v for k, v in out.model.items() if k != j}
            fixed = [((c[j],), b - sum(c[k] * point.get(k, 0) for k in range(system.n) if k != j)) for c, b in system.rows]
            assert is_sat(fixed, 1)
    out, _ = fmplex_sat(system, "B")
    if isinstance(out, Sat):
        assert any(all(evaluate(out.model, r) for r in leaf.rows) for leaf in qe.disjuncts())


@settings(max_examples=100, deadline=None)
@given(mixed(), st.sampled_from(["fm", "fmplex-c", "simplex"]))
def test_mixed_relations_end_to_end(problem, algorithm):
    cs, n = problem
    out, _ = solve_constraints(cs, n, algorithm)
    assert isinstance(out, Sat) == isinstance(check_constraints(cs, n), Sat)
    if isinstance(out, Sat):
        assert check_model(cs, out.model)
    elif out.certificate is not None and not any(c.relation is Relation.NEQ for c in cs):
        assert check_instance_certificate(cs, out.certificate)


@settings(max_examples=100, deadline=None)
@given(mixed())
def test_plain_round_trip(problem):
    cs, n = problem
    inst = ProblemInstance([f"v{k}" for k in range(n)], cs)
    again = parse_plain(emit_instance(inst))
    assert again.constraints == inst.constraints

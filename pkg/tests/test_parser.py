from fractions import Fraction as Q

import pytest

from fmplex.core import LinearConstraint, Relation, Sat, Unknown, Unsat
from fmplex.generate import random_instance, worstcase_instance
from fmplex.parser import ELIMINATE, ParseError, emit_instance, emit_result, parse_file, parse_plain, parse_smtlib

SMT = """
(set-logic QF_LRA)
(set-info :status unsat)
(declare-fun x () Real)
(declare-const y Real)
(assert (<= (+ (* 2 x) (- y)) 3)) ; comment
(assert (and (> x (/ 1 2)) (distinct y 0)))
(assert (>= (* (- 3) y) x))
(assert (< x 1.5))
(assert (= (- x y 1) 0))
(check-sat)
(get-model)
(exit)
"""


def test_smtlib_terms_and_relations():
    inst = parse_smtlib(SMT)
    assert inst.variable_names == ["x", "y"]
    rels = [c.relation for c in inst.constraints]
    assert rels == [Relation.LEQ, Relation.LT, Relation.NEQ, Relation.LEQ, Relation.LT, Relation.EQ]
    assert inst.constraints[0] == LinearConstraint((2, -1), Relation.LEQ, 3)
    assert inst.constraints[1] == LinearConstraint((-1, 0), Relation.LT, Q(-1, 2))
    assert inst.constraints[3] == LinearConstraint((1, 3), Relation.LEQ, 0)
    assert inst.constraints[4].rhs == Q(3, 2)
    assert inst.constraints[5] == LinearConstraint((1, -1), Relation.EQ, 1)


def test_smtlib_negative_literal():
    inst = parse_smtlib("(declare-fun a () Real)(assert (<= (* -2 a) 4))")
    assert inst.constraints == [LinearConstraint((-2,), Relation.LEQ, 4)]


@pytest.mark.parametrize("term", ["(let ((t a)) (<= t 4))", "(not (<= a 4))", "(or (<= a 1) (<= a 2))"])
def test_smtlib_outside_subset_rejected(term):
    with pytest.raises(ParseError):
        parse_smtlib(f"(declare-fun a () Real)(assert {term})")


@pytest.mark.parametrize(
    "text, where",
    [
        ("(assert (<= x 1))", (1, 14)),
        ("(declare-fun x () Real)\n(assert (<= (* x x) 1))", (2, 13)),
        ("(declare-fun x () Real)\n(assert (<= x 1)", (2, 1)),
        ("(declare-fun x () Int)", (1, 1)),
        ("(declare-fun x () Real)(assert (or (<= x 1) (<= x 2)))", (1, 32)),
    ],
)
def test_smtlib_errors_have_positions(text, where):
    with pytest.raises(ParseError) as exc:
        parse_smtlib(text)
    assert exc.value.line == where[0]
    assert exc.value.column is not None


def test_plain_format():
    inst = parse_plain("x2 - x1 <= 3\n2*x1 + -1*x2 > -1/2  # strict\n3 x1 = x2 + 1\nx1 != 0\n")
    assert inst.variable_names == ["x1", "x2"]
    assert inst.constraints[0] == LinearConstraint((-1, 1), Relation.LEQ, 3)
    assert inst.constraints[1] == LinearConstraint((-2, 1), Relation.LT, Q(1, 2))
    assert inst.constraints[2] == LinearConstraint((3, -1), Relation.EQ, 1)
    assert inst.constraints[3].relation is Relation.NEQ


def test_plain_directives():
    inst = parse_plain("vars: b, a\neliminate: a\na + b <= 1\n")
    assert inst.variable_names == ["b", "a"] and inst.goal == ELIMINATE and inst.eliminate == [1]
    with pytest.raises(ParseError):
        parse_plain("vars: a\na + b <= 1\n")


@pytest.mark.parametrize("bad", ["x1 <= <= 2", "x1 2 <= 3", "x1 <= ", "x1 * <= 2", "x1 ^ 2 <= 1"])
def test_plain_errors(bad):
    with pytest.raises(ParseError):
        parse_plain(bad)


def test_emit_round_trip():
    for inst in [worstcase_instance(3), random_instance(5, 3, seed=4)]:
        again = parse_plain(emit_instance(inst))
        assert again.constraints == inst.constraints
        assert again.variable_names == inst.variable_names
        assert again.goal == inst.goal and again.eliminate == inst.eliminate


def test_emit_results():
    model = {0: Q(1), 1: Q(-1, 2)}
    assert emit_result(Sat(model), "smt", ["a", "b"]) == "sat\n(model (define-fun a () Real 1) (define-fun b () Real -1/2))"
    assert emit_result(Sat(model), "plain", ["a", "b"]) == "sat\na = 1\nb = -1/2"
    assert emit_result(Unsat(frozenset({0, 2}))) == "unsat\ncore: 1 3"
    assert emit_result(Unknown("timeout")) == "unknown\nreason: timeout"


def test_parse_file_by_suffix(tmp_path):
    p = tmp_path / "a.smt2"
    p.write_text("(declare-fun x () Real)(assert (<= x 1))")
    assert parse_file(str(p)).constraints[0].rhs == 1
    q = tmp_path / "a.txt"
    q.write_text("x <= 1\n")
    assert parse_file(str(q)).constraints[0].rhs == 1

"""Clause-file and automaton-file formats."""

import random

import pytest

from bsrsat import corpus
from bsrsat.parser import (
    ParseError,
    parse_clause_set,
    parse_goal,
    parse_ta,
    print_clause_set,
    print_ta,
)
from bsrsat.terms import GuardViolationError, MODE_SLR, Relation

SLR_TEXT = """\
# full slr surface
mode slr
pred P : S^1 R^2
freeconst a b
skolem c d e
clause [x < 1; c <= d; def e != 2*c + 1] [P(a, x, y)] -> [P(b, y, y)]
"""

TA_TEXT = """\
clocks x y
loc a init inv x <= 1
loc b inv true
trans a -> b guard x >= 1, x - y < 2 reset {x}
"""


# --- clause files -----------------------------------------------------------


def test_parse_clause_set_full_surface():
    cs = parse_clause_set(SLR_TEXT)
    assert cs.mode == MODE_SLR
    assert cs.signature == {"P": (1, 2)}
    assert cs.fconsts == ["a", "b"]
    assert cs.skolems == ["c", "d", "e"]
    (cl,) = cs.clauses
    assert len(cl.lam) == 3 and len(cl.gamma) == 1 and len(cl.delta) == 1


def test_clause_set_print_parse_identity():
    cs = parse_clause_set(SLR_TEXT)
    assert parse_clause_set(print_clause_set(cs)) == cs


def test_parse_rejects_missing_clause_bracket():
    with pytest.raises(ParseError) as exc:
        parse_clause_set("mode slr\npred P : S^1 R^1\nclause [x <] [] -> []\n")
    assert exc.value.line == 3
    assert exc.value.col > 0


def test_parse_rejects_undeclared_predicate():
    text = "mode bd\npred P : S^0 R^1\nfreeconst a\nclause [] [] -> [Q(x)]\n"
    with pytest.raises(ParseError, match="undeclared predicate 'Q'"):
        parse_clause_set(text)


def test_parse_rejects_redeclared_constant():
    with pytest.raises(ParseError, match="redeclaration"):
        parse_clause_set("mode slr\nfreeconst a\nskolem a\n")


def test_parse_rejects_unguarded_difference():
    text = (
        "mode bd\npred P : S^0 R^2\nfreeconst a\n"
        "clause [x - y <= 1] [] -> [P(x, y)]\n"
    )
    with pytest.raises(GuardViolationError, match="x - y <= 1"):
        parse_clause_set(text)


def test_parse_rejects_skolem_in_bd():
    text = "mode bd\nskolem d\npred P : S^0 R^1\nfreeconst a\n"
    with pytest.raises((ParseError, Exception)):
        parse_clause_set(text)


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as exc:
        parse_clause_set("mode slr\nclaws []\n")
    assert exc.value.line == 2


def test_parse_equation_atoms():
    text = (
        "mode bd\npred P : S^1 R^1\nfreeconst a b\n"
        "clause [] [u ~ a] -> [P(u, x); a ~ b]\n"
    )
    cs = parse_clause_set(text)
    (cl,) = cs.clauses
    assert len(cl.gamma) == 1
    assert parse_clause_set(print_clause_set(cs)) == cs


def test_round_trip_generated_bd_sets():
    rng = random.Random(11)
    for _ in range(25):
        cs = corpus._raw_bd(rng)
        assert parse_clause_set(print_clause_set(cs)) == cs


def test_round_trip_generated_slr_sets():
    rng = random.Random(12)
    for _ in range(25):
        cs = corpus._raw_slr(rng)
        assert parse_clause_set(print_clause_set(cs)) == cs


# --- automaton files --------------------------------------------------------


def test_parse_ta_full_surface():
    aut = parse_ta(TA_TEXT)
    assert aut.clocks == ("x", "y")
    assert aut.locations == ("a", "b")
    assert aut.initial == "a"
    assert len(aut.transitions) == 1
    t = aut.transitions[0]
    assert t.source == "a" and t.target == "b" and t.resets == frozenset({"x"})


def test_ta_print_parse_identity():
    aut = parse_ta(TA_TEXT)
    assert parse_ta(print_ta(aut)) == aut


def test_parse_ta_rejects_fractional_constant():
    with pytest.raises(ParseError, match="integer"):
        parse_ta("clocks x\nloc a init inv x < 1/2\n")


def test_parse_ta_rejects_unknown_clock_in_reset():
    text = "clocks x\nloc a init inv true\ntrans a -> a guard true reset {z}\n"
    with pytest.raises(ParseError, match="unknown clock 'z'"):
        parse_ta(text)


def test_parse_ta_rejects_unknown_location():
    text = "clocks x\nloc a init inv true\ntrans a -> q guard true reset {}\n"
    with pytest.raises(ParseError, match="unknown location 'q'"):
        parse_ta(text)


def test_round_trip_generated_automata():
    rng = random.Random(13)
    for _ in range(25):
        aut, _ = corpus._raw_automaton(rng)
        assert parse_ta(print_ta(aut)) == aut


# --- goal strings -----------------------------------------------------------


def test_parse_goal_with_constraint():
    aut = parse_ta(TA_TEXT)
    q = parse_goal("b: x - y >= 1", aut)
    assert q.location == "b"
    assert q.constraint.atoms[0].rel == Relation.GE


def test_parse_goal_bare_location():
    aut = parse_ta(TA_TEXT)
    q = parse_goal("b", aut)
    assert q.location == "b"
    assert not q.constraint.atoms


def test_parse_goal_rejects_unknown_location():
    aut = parse_ta(TA_TEXT)
    with pytest.raises(ParseError, match="unknown goal location"):
        parse_goal("q: x < 1", aut)

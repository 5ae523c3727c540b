"""Core term, constraint, and clause layer."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bsrsat.terms import (
    Clause,
    ClauseSet,
    DiffConst,
    Equation,
    FloatRejectedError,
    FragmentError,
    FreeTerm,
    GroundCmp,
    GroundTerm,
    GuardViolationError,
    MODE_BD,
    MODE_SLR,
    PredAtom,
    Relation,
    SortDisciplineError,
    VarConst,
    VarVar,
    eval_clause,
    eval_constraint,
    floor_fr,
    rat,
)

rationals = st.fractions(min_value=-4, max_value=4, max_denominator=12)


# --- rationals and floors --------------------------------------------------


def test_rat_accepts_exact_inputs():
    assert rat(3) == Fraction(3)
    assert rat("2/7") == Fraction(2, 7)
    assert rat(Fraction(-1, 2)) == Fraction(-1, 2)


def test_rat_rejects_floats():
    with pytest.raises(FloatRejectedError):
        rat(0.5)


def test_floor_fr_examples():
    assert floor_fr(Fraction(7, 2)) == (3, Fraction(1, 2))
    assert floor_fr(Fraction(-1, 4)) == (-1, Fraction(3, 4))
    assert floor_fr(2) == (2, Fraction(0))
    assert floor_fr(Fraction(-3)) == (-3, Fraction(0))


@given(rationals)
def test_floor_fr_reconstructs(r):
    f, fr = floor_fr(r)
    assert isinstance(f, int)
    assert 0 <= fr < 1
    assert f + fr == r


# --- ground terms ----------------------------------------------------------


def test_ground_term_make_drops_zero_coeffs():
    t = GroundTerm.make(1, {"d": 0, "e": 2})
    assert t.coeffs == (("e", Fraction(2)),)
    assert not t.is_rational


def test_ground_term_classification():
    assert GroundTerm.constant(Fraction(1, 2)).is_rational
    d = GroundTerm.skolem("d")
    assert d.is_skolem and d.skolem_name == "d"
    assert d.is_constant_ref
    assert not GroundTerm.make(1, {"d": 1}).is_constant_ref


def test_ground_term_arithmetic():
    a = GroundTerm.make(1, {"d": 2})
    b = GroundTerm.make("1/2", {"d": -2, "e": 1})
    s = a.add(b)
    assert s.offset == Fraction(3, 2)
    assert s.coeffs == (("e", Fraction(1)),)
    assert a.sub(a) == GroundTerm.constant(0)
    assert a.scale(3).evaluate({"d": Fraction(1)}) == 9


@given(rationals, rationals, rationals)
def test_ground_term_evaluate_is_linear(o, c, v):
    t = GroundTerm.make(o, {"d": c})
    assert t.evaluate({"d": v}) == o + c * v
    assert t.scale(2).evaluate({"d": v}) == 2 * t.evaluate({"d": v})


def test_ground_term_str_round_readable():
    assert str(GroundTerm.make(0, {})) == "0"
    assert str(GroundTerm.make(-1, {"d": 1})) == "d - 1"


# --- relations and constraints ---------------------------------------------


def test_relation_flip_and_negate():
    assert Relation.LT.flip() is Relation.GT
    assert Relation.LE.negate() is Relation.GT
    assert Relation.EQ.negate() is Relation.NEQ
    for r in Relation:
        assert r.flip().flip() is r
        assert r.negate().negate() is r


@given(rationals, rationals)
def test_relation_holds_matches_python(a, b):
    assert Relation.LT.holds(a, b) == (a < b)
    assert Relation.GE.holds(a, b) == (a >= b)
    assert Relation.NEQ.holds(a, b) == (a != b)


@given(rationals, rationals, rationals)
def test_eval_constraint_semantics(x, y, c):
    base = {"x": x, "y": y}
    assert eval_constraint(VarConst("x", Relation.LE, GroundTerm.constant(c)), base) == (x <= c)
    assert eval_constraint(VarVar("x", Relation.GT, "y"), base) == (x > y)
    assert eval_constraint(DiffConst("x", "y", Relation.LT, c), base) == (x - y < c)
    assert eval_constraint(
        GroundCmp(GroundTerm.skolem("d"), Relation.EQ, GroundTerm.constant(c)),
        {},
        {"d": c},
    )


def test_eval_constraint_skolem_lookup():
    vc = VarConst("x", Relation.GE, GroundTerm.skolem("d"))
    assert eval_constraint(vc, {"x": Fraction(1)}, {"d": Fraction(0)})
    assert not eval_constraint(vc, {"x": Fraction(-1)}, {"d": Fraction(0)})


# --- clauses ----------------------------------------------------------------


def atom(pred, *base, free=()):
    return PredAtom(pred, tuple(FreeTerm(f, True) for f in free), tuple(base))


def test_clause_make_is_canonical():
    lam = [VarVar("x", Relation.LT, "y"), VarConst("x", Relation.GE, GroundTerm.constant(0))]
    gamma = [atom("P", "x"), atom("Q", "y")]
    a = Clause.make(lam, gamma, [])
    b = Clause.make(list(reversed(lam)), list(reversed(gamma)), [])
    assert a == b


def test_clause_collects_variables_and_rationals():
    cl = Clause.make(
        [VarConst("x", Relation.LT, GroundTerm.constant("3/2"))],
        [atom("P", "x", "y")],
        [atom("P", "y", "x")],
    )
    assert set(cl.base_vars()) == {"x", "y"}
    assert Fraction(3, 2) in cl.rationals()


def test_clause_eval_implication_semantics():
    cl = Clause.make(
        [VarConst("x", Relation.GE, GroundTerm.constant(0))],
        [atom("P", "x", free=("a",))],
        [atom("Q", "x", free=("a",))],
    )

    class Model:
        gamma = {}

        def free_value(self, const):
            return const

        def holds(self, pred, free_args, base_args):
            if pred == "P":
                return True
            return base_args[0] > 1

    m = Model()
    assert eval_clause(cl, m, {"x": Fraction(2)})  # head true
    assert not eval_clause(cl, m, {"x": Fraction(1)})  # body holds, head false
    assert eval_clause(cl, m, {"x": Fraction(-1)})  # constraint falsified


def test_equation_eval():
    eq = Equation(FreeTerm("a", True), FreeTerm("u", False))

    class Model:
        gamma = {}

        def free_value(self, const):
            return "ea"

        def holds(self, *args):  # pragma: no cover - not reached
            raise AssertionError

    cl = Clause.make([], [], [eq])
    assert eval_clause(cl, Model(), {"u": "ea"})
    assert not eval_clause(cl, Model(), {"u": "eb"})


# --- clause sets and fragment discipline -----------------------------------


def sig(**preds):
    return dict(preds)


def test_clause_set_validate_bd_guard():
    guarded = Clause.make(
        [
            VarConst("x", Relation.GE, GroundTerm.constant(0)),
            VarConst("x", Relation.LE, GroundTerm.constant(1)),
            VarConst("y", Relation.GE, GroundTerm.constant(0)),
            VarConst("y", Relation.LE, GroundTerm.constant(1)),
            DiffConst("x", "y", Relation.LT, 1),
        ],
        [],
        [atom("P", "x", "y")],
    )
    cs = ClauseSet(MODE_BD, [guarded], sig(P=(0, 2)), fconsts=["a"])
    cs.validate()


def test_clause_set_validate_rejects_unguarded_diff():
    bare = Clause.make(
        [DiffConst("x", "y", Relation.LT, 1)],
        [],
        [atom("P", "x", "y")],
    )
    cs = ClauseSet(MODE_BD, [bare], sig(P=(0, 2)), fconsts=["a"])
    with pytest.raises(GuardViolationError):
        cs.validate()


def test_clause_set_validate_rejects_diff_in_slr():
    cl = Clause.make(
        [
            VarConst("x", Relation.GE, GroundTerm.constant(0)),
            VarConst("x", Relation.LE, GroundTerm.constant(1)),
            VarConst("y", Relation.GE, GroundTerm.constant(0)),
            VarConst("y", Relation.LE, GroundTerm.constant(1)),
            DiffConst("x", "y", Relation.LT, 1),
        ],
        [],
        [atom("P", "x", "y")],
    )
    cs = ClauseSet(MODE_SLR, [cl], sig(P=(0, 2)), fconsts=["a"])
    with pytest.raises(FragmentError):
        cs.validate()


def test_clause_set_validate_rejects_skolem_in_bd():
    cl = Clause.make(
        [VarConst("x", Relation.LE, GroundTerm.skolem("d"))],
        [],
        [atom("P", "x")],
    )
    cs = ClauseSet(MODE_BD, [cl], sig(P=(0, 1)), fconsts=["a"], skolems=["d"])
    with pytest.raises(FragmentError):
        cs.validate()


def test_clause_set_validate_rejects_arity_mismatch():
    cl = Clause.make([], [], [atom("P", "x")])
    cs = ClauseSet(MODE_SLR, [cl], sig(P=(1, 1)), fconsts=["a"])
    with pytest.raises(SortDisciplineError):
        cs.validate()

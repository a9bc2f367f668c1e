import random

import pytest

from mfdlog.corpus import example, random_program
from mfdlog.query import (BoundQuery, IncompleteError, brave, cautious, decide, make_query, query_program)
from mfdlog.solver import enumerate_models, is_minimal_founded, is_minimal_model, is_stable
from mfdlog.syntax import Atom, Literal, ProgramError, parse_program

CHECKS = {"mm": is_minimal_model, "mf": is_minimal_founded, "sm": is_stable}


def test_brave_examples():
    v = brave(make_query(example("p7"), "thirsty"), kind="mf")
    assert v.answer and v.witness_atoms() == ["eat", "thirsty"]
    assert not brave(make_query(example("p1"), "a"), kind="sm").answer
    assert brave(make_query(example("p1"), "a"), kind="mf").answer


def test_cautious_examples():
    assert cautious(make_query(example("p7"), "eat"), kind="mf").answer
    v = cautious(make_query(example("p7"), "thirsty"), kind="mf")
    assert not v.answer and v.witness_atoms() == ["drink", "eat"]
    vac = cautious(make_query(example("p6"), "a"), kind="sm")
    assert vac.answer and vac.witness is None


def test_negative_goal():
    q = make_query(example("p7"), "not thirsty")
    assert brave(q, kind="mf").answer
    assert not brave(q, kind="sm").answer


def test_goal_must_be_ground():
    assert BoundQuery(example("p1"), Literal(Atom("a"), True)).goal.positive
    with pytest.raises(ProgramError):
        make_query(parse_program("p(a)."), "p(X)")


def test_goal_predicate_known():
    with pytest.raises(ProgramError):
        brave(make_query(example("p1"), "zz"))


def test_goal_atom_outside_base_is_false():
    p = parse_program("p(a). q(X) :- p(X).")
    assert not brave(make_query(p, "q(b)"), kind="mf").answer
    assert cautious(make_query(p, "not q(b)"), kind="mf").answer


def test_incomplete_raises():
    with pytest.raises(IncompleteError):
        cautious(make_query(example("p6"), "a"), kind="mf", budget=1)


def test_decide_rejects_mode():
    g = query_program(make_query(example("p1"), "a"))
    with pytest.raises(ValueError):
        decide(Literal(Atom("a"), True), g, enumerate_models(g, "mf"), "sometimes")


def test_database_query():
    p = parse_program("reach(X,Y) :- e(X,Y). reach(X,Z) :- reach(X,Y), e(Y,Z).")
    from mfdlog.grounder import Database
    from mfdlog.syntax import parse_atom
    d = Database.from_facts(parse_atom(f) for f in ["e(1,2)", "e(2,3)"])
    assert cautious(make_query(p, "reach(1,3)"), d, "mf").answer
    assert not brave(make_query(p, "reach(3,1)"), d, "mf").answer


def _atom_goals(g):
    return [str(a) for a in g.atoms]


def test_duality_and_witnesses():
    rng = random.Random(21)
    for _ in range(60):
        p = random_program(rng)
        g = query_program(make_query(p, "p0"))
        for kind in ("mm", "mf", "sm"):
            for goal in _atom_goals(g):
                c = cautious(make_query(p, goal), kind=kind)
                b = brave(make_query(p, f"not {goal}"), kind=kind)
                assert c.answer == (not b.answer)
                for v in (c, b):
                    if v.witness is not None:
                        assert CHECKS[kind](v.witness, v.ground_program)


def test_class_refinement():
    rng = random.Random(22)
    for _ in range(60):
        p = random_program(rng)
        g = query_program(make_query(p, "p0"))
        for goal in _atom_goals(g):
            q = make_query(p, goal)
            sm, mf, mm = (brave(q, kind=k).answer for k in ("sm", "mf", "mm"))
            assert (not sm or mf) and (not mf or mm)

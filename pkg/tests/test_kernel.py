import random

import pytest

from mfdlog.corpus import example, random_ground
from mfdlog.grounder import GroundRule, ground
from mfdlog.kernel import (ReductProgram, head_delete, is_founded, is_model, project, reduct, rewrite_denials,
                           s_fixpoint, s_step, satisfies, t_fixpoint)
from mfdlog.syntax import format_program, parse_program


def _g(text):
    return ground(parse_program(text))


def _i(g, *names):
    return g.interpretation(names)


def test_satisfies_examples():
    g = _g("a | b | c. :- not a. :- not b.")
    deny_not_a = g.rules[1]
    assert satisfies(_i(g, "a", "b"), deny_not_a)
    assert not satisfies(_i(g, "c"), deny_not_a)
    assert not satisfies(frozenset(), g.rules[0])


def test_empty_rule_never_satisfied():
    assert not satisfies(frozenset(), GroundRule())
    assert not satisfies(frozenset({0, 1}), GroundRule())


def test_is_model_examples():
    g = ground(example("p1"))
    assert is_model(_i(g, "a", "b"), g)
    assert not is_model(_i(g, "a"), g)
    assert is_model(_i(g, "a", "b", "c"), g)


def test_reduct_examples():
    g = ground(example("p1"))
    r = reduct(g, _i(g, "a", "b"))
    assert [g.rule_text(x) for x in r.rules] == ["a | b | c."]
    pos = _g("a :- b. b | c.")
    assert reduct(pos, frozenset()).rules == pos.rules
    h = _g("a :- not b.")
    assert [h.rule_text(x) for x in reduct(h, frozenset()).rules] == ["a."]


def test_reduct_keeps_empty_rule():
    g = _g("a | b. :- not a.")
    r = reduct(g, frozenset())
    assert GroundRule() in r.rules


def test_reduct_program_rejects_negation():
    with pytest.raises(ValueError):
        ReductProgram((GroundRule((0,), (), (1,)),))


def test_s_fixpoint_examples():
    g = _g("a | b | c.")
    assert g.render(s_fixpoint(g)) == ["a", "b", "c"]
    assert s_fixpoint(ReductProgram(())) == frozenset()
    h = _g("a. b :- a. c | d :- b.")
    assert h.render(s_fixpoint(h)) == ["a", "b", "c", "d"]


def test_t_fixpoint_examples():
    g = _g("a. b :- a.")
    assert g.render(t_fixpoint(g)) == ["a", "b"]
    assert t_fixpoint(ReductProgram(())) == frozenset()


def test_t_fixpoint_rejects_disjunction_and_negation():
    with pytest.raises(ValueError):
        t_fixpoint(_g("a | b."))
    with pytest.raises(ValueError):
        t_fixpoint(_g("a :- not b."))
    with pytest.raises(ValueError):
        t_fixpoint(_g("a. :- a."))


def test_s_equals_t_on_normal_positive():
    rng = random.Random(17)
    for _ in range(500):
        g = random_ground(rng, normal=True, positive=True, denial_rate=0.0)
        assert s_fixpoint(g) == t_fixpoint(g)


def test_s_step_monotone():
    rng = random.Random(23)
    for _ in range(200):
        g = random_ground(rng, positive=True)
        n = len(g.atoms)
        i = frozenset(a for a in range(n) if rng.random() < 0.4)
        j = i | frozenset(a for a in range(n) if rng.random() < 0.4)
        assert s_step(g, i) <= s_step(g, j)


def test_s_fixpoint_within_base_steps():
    rng = random.Random(29)
    for _ in range(200):
        g = random_ground(rng, positive=True)
        cur = frozenset()
        for _ in range(len(g.atoms) + 1):
            cur = s_step(g, cur)
        assert cur == s_fixpoint(g)


def test_reduct_always_positive():
    rng = random.Random(31)
    for _ in range(200):
        g = random_ground(rng)
        i = frozenset(a for a in range(len(g.atoms)) if rng.random() < 0.5)
        assert all(not r.neg for r in reduct(g, i).rules)


def test_is_founded_examples():
    g = ground(example("p1"))
    assert is_founded(_i(g, "a", "b"), g)
    assert is_founded(_i(g, "a", "b", "c"), g)
    h = ground(example("p7"))
    assert is_founded(_i(h, "eat", "drink"), h)


def test_is_founded_requires_model():
    g = ground(example("p1"))
    assert not is_founded(_i(g, "a"), g)


def test_head_delete_example_six():
    g = ground(example("p6"))
    split = head_delete(g, _i(g, "a", "b"))
    assert sorted(g.rule_text(r) for r in split.standard) == ["a :- not b.", "a | b.", "b :- not c."]
    assert [g.rule_text(r) for r in split.denials] == [":- not a."]


def test_head_delete_identity_and_empty():
    g = ground(example("p6"))
    assert head_delete(g, frozenset(range(len(g.atoms)))).rules == g.rules
    h = _g("a | b.")
    split = head_delete(h, frozenset())
    assert split.standard == () and split.denials == (GroundRule(),)


def test_head_delete_split_partitions():
    rng = random.Random(37)
    for _ in range(100):
        g = random_ground(rng)
        m = frozenset(a for a in range(len(g.atoms)) if rng.random() < 0.5)
        split = head_delete(g, m)
        assert all(r.head for r in split.standard)
        assert all(not r.head for r in split.denials)
        assert len(split.rules) == len(g.rules)


def test_head_delete_commutes_with_reduct():
    rng = random.Random(41)
    for _ in range(150):
        g = random_ground(rng, n_atoms=rng.randint(1, 10))
        n = len(g.atoms)
        for _ in range(8):
            m = frozenset(a for a in range(n) if rng.random() < 0.5)
            i = frozenset(a for a in range(n) if rng.random() < 0.5)
            a = head_delete(reduct(g, i), m)
            b = reduct(head_delete(g, m).program(g), i)
            assert set(a.standard) == {r for r in b.rules if r.head}


def test_rewrite_denials_examples():
    p = rewrite_denials(parse_program(":- not a."))
    assert format_program(p) == "__c1 :- not a, not __c1.\n"
    q = parse_program("p(a,b). :- p(X,Y).")
    assert str(rewrite_denials(q).rules[1]) == "__c1(X,Y) :- p(X,Y), not __c1(X,Y)."
    plain = parse_program("a :- not b.")
    assert rewrite_denials(plain).rules == plain.rules


def test_rewrite_denials_fresh_per_denial():
    p = rewrite_denials(parse_program("a | b. :- a. :- b."))
    assert [r.head[0].predicate for r in p.rules[1:]] == ["__c1", "__c2"]


def test_project():
    src = _g("a | b. c :- a.")
    dst = _g("a | b.")
    assert project([src.interpretation(["a", "c"])], src, dst) == {dst.interpretation(["a"])}

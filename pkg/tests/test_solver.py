import random

import pytest

from mfdlog.corpus import EXAMPLES, example, random_ground
from mfdlog.grounder import ground
from mfdlog.kernel import is_founded, is_model
from mfdlog.oracle import oracle_enumerate
from mfdlog.search import Budget, BudgetExhausted, ClauseSearch, SubsetSearch, rule_clauses, smaller_model
from mfdlog.solver import (ModelSet, NotStratifiedError, Semantics, characterization_check, enumerate_models,
                           is_minimal_founded, is_minimal_model, is_stable, perfect_models, prefer)
from mfdlog.syntax import parse_program, stratify

KINDS = list(Semantics)


def _g(text):
    return ground(parse_program(text))


def _named(g, models):
    return {frozenset(g.render(m)) for m in models}


def test_minimal_model_examples():
    g = _g("a | b.")
    assert is_minimal_model(g.interpretation(["a"]), g)
    assert not is_minimal_model(g.interpretation(["a", "b"]), g)
    p1 = ground(example("p1"))
    assert is_minimal_model(p1.interpretation(["a", "b"]), p1)
    assert is_minimal_model(frozenset(), _g("a :- b."))
    assert not is_minimal_model(frozenset(), _g("a."))


def test_stable_examples():
    p5 = ground(example("p5"))
    assert is_stable(p5.interpretation(["a"]), p5)
    assert is_stable(p5.interpretation(["b", "c"]), p5)
    p6 = ground(example("p6"))
    assert not is_stable(p6.interpretation(["a", "b"]), p6)
    p7 = ground(example("p7"))
    assert not is_stable(p7.interpretation(["eat", "drink"]), p7)
    assert is_stable(p7.interpretation(["eat", "thirsty"]), p7)


def test_minimal_founded_examples():
    p1 = ground(example("p1"))
    assert is_minimal_founded(p1.interpretation(["a", "b"]), p1)
    assert not is_minimal_founded(p1.interpretation(["a", "b", "c"]), p1)
    p6 = ground(example("p6"))
    n = len(p6.atoms)
    mf = {m for m in (frozenset(a for a in range(n) if bits >> a & 1) for bits in range(1 << n))
          if is_minimal_founded(m, p6)}
    assert _named(p6, mf) == {frozenset("ab"), frozenset("bc"), frozenset("ac")}
    p7 = ground(example("p7"))
    assert is_minimal_founded(p7.interpretation(["eat", "drink"]), p7)


def test_characterization_examples():
    p6 = ground(example("p6"))
    for m in (["a", "b"], ["a", "c"], ["b", "c"]):
        assert characterization_check(p6.interpretation(m), p6)
    p1 = ground(example("p1"))
    assert not characterization_check(p1.interpretation(["c"]), p1)


def test_prefer_examples():
    g = _g("a | b :- not c.")
    s = stratify(g)
    a, b, c = (g.interpretation([x]) for x in "abc")
    assert prefer(a, c, s) and prefer(b, c, s)
    assert not prefer(c, a, s)
    assert not prefer(a, a, s)
    assert not prefer(a, b, s) and not prefer(b, a, s)


def test_prefer_subset():
    rng = random.Random(2)
    for _ in range(100):
        g = random_ground(rng, n_atoms=6)
        s = stratify(g)
        if s is None:
            continue
        n = len(g.atoms)
        big = frozenset(a for a in range(n) if rng.random() < 0.6)
        small = frozenset(a for a in big if rng.random() < 0.5)
        if small != big:
            assert prefer(small, big, s)


def test_perfect_examples():
    g = _g("a | b :- not c.")
    s = stratify(g)
    for method in ("layered", "preference"):
        assert _named(g, perfect_models(g, s, method)) == {frozenset("a"), frozenset("b")}


def test_perfect_positive_equals_mm():
    rng = random.Random(4)
    for _ in range(100):
        g = random_ground(rng, positive=True)
        s = stratify(g)
        assert s is not None
        assert perfect_models(g, s).models == enumerate_models(g, "mm").models


def test_perfect_routes_agree_and_equal_sm():
    rng = random.Random(6)
    checked = 0
    for _ in range(400):
        g = random_ground(rng)
        s = stratify(g)
        if s is None:
            continue
        checked += 1
        layered = perfect_models(g, s, "layered")
        assert layered.models == perfect_models(g, s, "preference").models
        assert layered.models == enumerate_models(g, "sm").models
    assert checked > 100


def test_perfect_with_unreachable_denial_level():
    # the denial sits above every atom level and must still filter
    g = _g("p5 | p7. :- not p4.")
    s = stratify(g)
    assert perfect_models(g, s, "layered").models == ()
    assert perfect_models(g, s, "preference").models == ()


def test_perfect_rejects_unstratified():
    with pytest.raises(NotStratifiedError):
        enumerate_models(_g("a :- not b. b :- not a."), "pm")
    with pytest.raises(ValueError):
        perfect_models(_g("a."), stratify(_g("a.")), method="bogus")


def test_enumerate_examples():
    for name, (text, expected) in EXAMPLES.items():
        g = ground(parse_program(text))
        for kind, sets in expected.items():
            assert _named(g, enumerate_models(g, kind)) == {frozenset(s) for s in sets}, (name, kind)


def test_empty_program_all_kinds():
    g = ground(parse_program(""))
    for kind in KINDS:
        assert enumerate_models(g, kind).models == (frozenset(),)
        assert oracle_enumerate(g, kind).models == (frozenset(),)


def test_model_set_ordering():
    ms = ModelSet.of(Semantics.MM, [frozenset({3}), frozenset({0, 1}), frozenset({2}), frozenset({3})])
    assert ms.models == (frozenset({2}), frozenset({3}), frozenset({0, 1}))
    assert ms.complete and not ms.budget_exhausted


def test_enumeration_deterministic():
    rng = random.Random(8)
    for _ in range(30):
        g = random_ground(rng)
        for kind in ("mm", "mf", "sm"):
            assert enumerate_models(g, kind).models == enumerate_models(g, kind).models


def test_budget_exhaustion_flagged():
    g = ground(example("p6"))
    ms = enumerate_models(g, "mf", budget=1)
    assert ms.budget_exhausted and not ms.complete
    assert ms.as_set() <= enumerate_models(g, "mf").as_set()


def test_budget_env_override(monkeypatch):
    monkeypatch.setenv("MFDLOG_BUDGET", "1")
    assert enumerate_models(ground(example("p6")), "mf").budget_exhausted
    monkeypatch.delenv("MFDLOG_BUDGET")
    assert enumerate_models(ground(example("p6")), "mf").complete


def test_returned_models_pass_their_check():
    rng = random.Random(10)
    checks = {"mm": is_minimal_model, "mf": is_minimal_founded, "sm": is_stable,
              "models": lambda m, g: is_model(m, g), "f": lambda m, g: is_founded(m, g)}
    for _ in range(100):
        g = random_ground(rng)
        for kind, check in checks.items():
            for m in enumerate_models(g, kind):
                assert check(m, g)


def test_oracle_examples():
    p5 = ground(example("p5"))
    assert _named(p5, oracle_enumerate(p5, "sm")) == {frozenset("a"), frozenset("bc")}
    g = _g("a | b.")
    assert _named(g, oracle_enumerate(g, "mm")) == {frozenset("a"), frozenset("b")}


def test_oracle_cap():
    g = _g(" ".join(f"p{i} | q{i}." for i in range(11)))
    with pytest.raises(ValueError):
        oracle_enumerate(g, "mm")
    assert len(oracle_enumerate(g, "mm", cap=22)) == 2 ** 11


def test_engine_matches_oracle_quick():
    rng = random.Random(12)
    for _ in range(60):
        g = random_ground(rng)
        for kind in KINDS:
            if kind is Semantics.PM and stratify(g) is None:
                continue
            assert enumerate_models(g, kind).models == oracle_enumerate(g, kind).models, kind


def test_containment_chain_quick():
    rng = random.Random(14)
    for _ in range(60):
        g = random_ground(rng)
        sm, mf, mm = (enumerate_models(g, k).as_set() for k in ("sm", "mf", "mm"))
        assert sm <= mf <= mm


# -- search internals -------------------------------------------------------

def _brute_models(n, rules):
    out = set()
    for bits in range(1 << n):
        m = frozenset(a for a in range(n) if bits >> a & 1)
        if is_model(m, type("P", (), {"rules": rules})()):
            out.add(m)
    return out


def test_clause_search_finds_all_models():
    rng = random.Random(16)
    for _ in range(100):
        g = random_ground(rng)
        found = list(ClauseSearch(len(g.atoms), rule_clauses(g.rules)).models())
        assert len(found) == len(set(found))
        assert set(found) == _brute_models(len(g.atoms), g.rules)


def test_smaller_model_matches_brute_force():
    rng = random.Random(18)
    for _ in range(100):
        g = random_ground(rng)
        models = _brute_models(len(g.atoms), g.rules)
        reuse = SubsetSearch(len(g.atoms), g.rules)
        for m in models:
            expected = any(x < m for x in models)
            got = smaller_model(len(g.atoms), g.rules, m)
            assert (got is not None) == expected
            assert (reuse.smaller(m) is not None) == expected
            if got is not None:
                assert got < m and got in models


def test_budget_counts_nodes():
    b = Budget(5)
    for _ in range(5):
        b.tick()
    with pytest.raises(BudgetExhausted):
        b.tick()

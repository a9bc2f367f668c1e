"""Membership checks and model enumeration for the supported semantics."""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass
from typing import AbstractSet, Iterable, Iterator, Optional, Sequence

import networkx as nx

from .grounder import GroundProgram, GroundRule
from .kernel import HasRules, head_delete, is_founded, is_model, reduct, satisfies
from .search import Budget, BudgetExhausted, ClauseSearch, SubsetSearch, rule_clauses, smaller_model
from .syntax import StratumMap, stratify

DEFAULT_BUDGET = 2**22
PREFERENCE_CROSSCHECK_ATOMS = 12


class Semantics(str, enum.Enum):
    MODELS = "models"
    MM = "mm"
    F = "f"
    MF = "mf"
    SM = "sm"
    PM = "pm"

    def __str__(self) -> str:
        return self.value


class NotStratifiedError(ValueError):
    pass


def default_budget() -> int:
    value = os.environ.get("MFDLOG_BUDGET")
    return int(value) if value else DEFAULT_BUDGET


def model_key(m: AbstractSet[int]) -> tuple[int, list[int]]:
    return len(m), sorted(m)


@dataclass(frozen=True)
class ModelSet:
    semantics: Semantics
    models: tuple[frozenset[int], ...]
    complete: bool = True
    budget_exhausted: bool = False

    @classmethod
    def of(cls, semantics: Semantics, models: Iterable[frozenset[int]], exhausted: bool = False) -> ModelSet:
        ordered = tuple(sorted(set(models), key=model_key))
        return cls(Semantics(semantics), ordered, not exhausted, exhausted)

    def __len__(self) -> int:
        return len(self.models)

    def __iter__(self) -> Iterator[frozenset[int]]:
        return iter(self.models)

    def as_set(self) -> set[frozenset[int]]:
        return set(self.models)


def _n_atoms(g: HasRules, *interps: AbstractSet[int]) -> int:
    atoms = getattr(g, "atoms", None)
    if atoms is not None:
        return len(atoms)
    ids = [a for r in g.rules for part in (r.head, r.pos, r.neg) for a in part]
    ids.extend(a for m in interps for a in m)
    return max(ids, default=-1) + 1


def search_order(g: GroundProgram) -> list[int]:
    """Atoms ordered by dependency depth, so body atoms are decided before the heads they feed."""
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(g.atoms)))
    for r in g.rules:
        for h in r.head:
            graph.add_edges_from((b, h) for b in r.pos + r.neg)
    cond = nx.condensation(graph)
    order: list[int] = []
    for generation in nx.topological_generations(cond):
        order.extend(sorted(a for c in generation for a in cond.nodes[c]["members"]))
    return order


# -- membership -------------------------------------------------------------

def is_minimal_model(m: AbstractSet[int], g: HasRules, budget: Optional[Budget] = None,
                     subsets: Optional[SubsetSearch] = None) -> bool:
    """``subsets`` may carry a prepared search over g's rules, reused across calls."""
    m = frozenset(m)
    if not is_model(m, g):
        return False
    if subsets is None:
        return smaller_model(_n_atoms(g, m), g.rules, m, budget=budget) is None
    return subsets.smaller(m, budget) is None


def is_stable(m: AbstractSet[int], g: HasRules, budget: Optional[Budget] = None,
              subsets: Optional[SubsetSearch] = None) -> bool:
    return is_minimal_model(m, reduct(g, m), budget)


def is_minimal_founded(m: AbstractSet[int], g: HasRules, budget: Optional[Budget] = None,
                       subsets: Optional[SubsetSearch] = None) -> bool:
    return is_minimal_model(m, g, budget, subsets) and is_founded(m, g)


@dataclass(frozen=True)
class _Rules:
    rules: tuple[GroundRule, ...]


def characterization_check(m: AbstractSet[int], g: HasRules, budget: Optional[Budget] = None) -> bool:
    """Minimal-founded test through the standard/denial split of the head-deleted program."""
    split = head_delete(g, m)
    return (
        is_minimal_model(m, g, budget)
        and is_founded(m, _Rules(split.standard))
        and all(satisfies(m, r) for r in split.denials)
    )


def prefer(m: AbstractSet[int], n: AbstractSet[int], s: StratumMap) -> bool:
    """m precedes n: every atom of m - n is outranked by some atom of n - m on a lower stratum."""
    if m == n:
        return False
    n_only = [b for b in n if b not in m]
    return all(any(s[a] > s[b] for b in n_only) for a in m if a not in n)


# -- enumeration ------------------------------------------------------------

def _minimal_models(n: int, rules: Sequence[GroundRule], order: Sequence[int], budget: Budget,
                    fixed_false: Iterable[int] = (),
                    subsets: Optional[SubsetSearch] = None) -> Iterator[frozenset[int]]:
    # every model found is shrunk to a minimal one, whose supersets are then blocked
    fixed_false = frozenset(fixed_false)
    search = ClauseSearch(n, rule_clauses(rules), order, fixed_false, budget)
    subsets = subsets or SubsetSearch(n, rules, order)
    found: set[frozenset[int]] = set()
    for m in search.models():
        while True:
            smaller = subsets.smaller(m, budget)
            if smaller is None:
                break
            m = smaller
        search.add_clause((), sorted(m))
        if m not in found:
            found.add(m)
            yield m


def minimal_models(g: GroundProgram, budget: Optional[Budget] = None) -> Iterator[frozenset[int]]:
    return _minimal_models(len(g.atoms), g.rules, search_order(g), budget or Budget())


def iter_models(g: GroundProgram, kind: Semantics | str, budget: Budget) -> Iterator[frozenset[int]]:
    """Models of the requested class in search order; raises BudgetExhausted when the budget runs out."""
    kind = Semantics(kind)
    if kind is Semantics.PM:
        s = stratify(g)
        if s is None:
            raise NotStratifiedError("perfect models need a locally stratified program")
        yield from perfect_models(g, s, budget=budget, partial=False)
        return
    n, order = len(g.atoms), search_order(g)
    if kind in (Semantics.MODELS, Semantics.F):
        for m in ClauseSearch(n, rule_clauses(g.rules), order, budget=budget).models():
            if kind is Semantics.MODELS or is_founded(m, g):
                yield m
        return
    check = {Semantics.MM: is_minimal_model, Semantics.MF: is_minimal_founded, Semantics.SM: is_stable}[kind]
    subsets = SubsetSearch(n, g.rules, order)
    for m in _minimal_models(n, g.rules, order, budget, subsets=subsets):
        # every candidate is re-verified by the membership check before it is reported
        if check(m, g, budget, subsets):
            yield m


def enumerate_models(g: GroundProgram, kind: Semantics | str = Semantics.MF,
                     budget: Optional[int] = None) -> ModelSet:
    """All models of the requested class; on budget exhaustion the partial set is flagged."""
    kind = Semantics(kind)
    counter = Budget(default_budget() if budget is None else budget)
    found: list[frozenset[int]] = []
    try:
        for m in iter_models(g, kind, counter):
            found.append(m)
    except BudgetExhausted:
        return ModelSet.of(kind, found, exhausted=True)
    return ModelSet.of(kind, found)


# -- perfect models ---------------------------------------------------------

def _split_by_level(g: GroundProgram, s: StratumMap):
    head_rules: dict[int, list[GroundRule]] = {}
    denials: dict[int, list[GroundRule]] = {}
    for r in g.rules:
        target = head_rules if r.head else denials
        target.setdefault(s.rule_level(r), []).append(r)
    return head_rules, denials


def _layered(g: GroundProgram, s: StratumMap, budget: Budget) -> list[frozenset[int]]:
    n, order = len(g.atoms), search_order(g)
    head_rules, denials = _split_by_level(g, s)
    partial = [frozenset()]
    for level in sorted(set(s.level.values()) | set(denials)):
        layer_atoms = {a for a in range(n) if s[a] == level}
        outside = [a for a in range(n) if a not in layer_atoms]
        layer_order = [a for a in order if a in layer_atoms]
        extended = []
        for lower in partial:
            layer = []
            for r in head_rules.get(level, ()):
                if any(s[b] < level and b not in lower for b in r.pos) or any(c in lower for c in r.neg):
                    continue
                layer.append(GroundRule(r.head, tuple(b for b in r.pos if s[b] == level)))
            for chosen in _minimal_models(n, layer, layer_order, budget, outside):
                m = lower | chosen
                if all(satisfies(m, d) for d in denials.get(level, ())):
                    extended.append(m)
        partial = extended
    return partial


def _by_preference(g: GroundProgram, s: StratumMap, budget: Budget) -> list[frozenset[int]]:
    head_part = [r for r in g.rules if r.head]
    models = list(ClauseSearch(len(g.atoms), rule_clauses(head_part), budget=budget).models())
    perfect = [m for m in models if not any(prefer(other, m, s) for other in models)]
    return [m for m in perfect if all(satisfies(m, r) for r in g.rules if not r.head)]


def perfect_models(g: GroundProgram, s: StratumMap, method: str = "layered",
                   budget: Optional[Budget] = None, partial: bool = True) -> ModelSet:
    """Perfect models, with denials acting as filters on the head-bearing part.

    ``method`` is "layered" (minimal models stratum by stratum) or "preference"
    (models with no preferred model).  The layered route is cross-checked against
    the preference route on small programs.  With ``partial`` False an exhausted
    budget raises BudgetExhausted instead of returning an empty flagged set.
    """
    budget = budget or Budget()
    try:
        if method == "preference":
            return ModelSet.of(Semantics.PM, _by_preference(g, s, budget))
        if method != "layered":
            raise ValueError(f"unknown method {method!r}")
        models = ModelSet.of(Semantics.PM, _layered(g, s, budget))
        if len(g.atoms) <= PREFERENCE_CROSSCHECK_ATOMS:
            other = ModelSet.of(Semantics.PM, _by_preference(g, s, Budget()))
            if other.models != models.models:
                raise RuntimeError("layered and preference perfect-model computations disagree")
        return models
    except BudgetExhausted:
        if not partial:
            raise
        return ModelSet(Semantics.PM, (), complete=False, budget_exhausted=True)

"""Semantic operators on ground programs.

Interpretations are frozensets of atom ids of a :class:`GroundProgram`.  The
operators accept any object exposing a ``rules`` sequence of ground rules, so
they apply equally to ground programs, reducts and head-deleted programs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import AbstractSet, Iterable, Protocol, Sequence

from .grounder import GroundProgram, GroundRule
from .syntax import Atom, Program, Rule, var

Interpretation = frozenset  # frozenset[int] of atom ids


class HasRules(Protocol):
    rules: Sequence[GroundRule]


@dataclass(frozen=True)
class ReductProgram:
    rules: tuple[GroundRule, ...]

    def __post_init__(self):
        if any(r.neg for r in self.rules):
            raise ValueError("a reduct has no negative body literals")


@dataclass(frozen=True)
class SplitProgram:
    standard: tuple[GroundRule, ...]
    denials: tuple[GroundRule, ...]

    @property
    def rules(self) -> tuple[GroundRule, ...]:
        return self.standard + self.denials

    def program(self, g: GroundProgram) -> GroundProgram:
        """The transformed program over g's atom table."""
        return g.with_rules(self.rules)


def satisfies(i: AbstractSet[int], r: GroundRule) -> bool:
    body = all(b in i for b in r.pos) and not any(c in i for c in r.neg)
    return not body or any(a in i for a in r.head)


def is_model(i: AbstractSet[int], g: HasRules) -> bool:
    return all(satisfies(i, r) for r in g.rules)


def reduct(g: HasRules, i: AbstractSet[int]) -> ReductProgram:
    return ReductProgram(tuple(
        GroundRule(r.head, r.pos) for r in g.rules if not any(c in i for c in r.neg)
    ))


def s_step(rp: HasRules, m: AbstractSet[int]) -> frozenset[int]:
    """One application of S: every head atom of a rule whose positive body holds in m."""
    out: set[int] = set()
    for r in rp.rules:
        if all(b in m for b in r.pos):
            out.update(r.head)
    return frozenset(out)


def s_fixpoint(rp: HasRules) -> frozenset[int]:
    current: frozenset[int] = frozenset()
    while True:
        nxt = s_step(rp, current)
        if nxt == current:
            return current
        current = nxt


def t_fixpoint(rp: HasRules) -> frozenset[int]:
    """Least fixpoint of the immediate consequence operator of a normal positive program."""
    for r in rp.rules:
        if len(r.head) != 1 or r.neg:
            raise ValueError("t_fixpoint needs a positive program whose rules have exactly one head atom")
    derived: set[int] = set()
    changed = True
    while changed:
        changed = False
        for r in rp.rules:
            if r.head[0] not in derived and all(b in derived for b in r.pos):
                derived.add(r.head[0])
                changed = True
    return frozenset(derived)


def is_founded(m: AbstractSet[int], g: HasRules) -> bool:
    return is_model(m, g) and set(m) <= s_fixpoint(reduct(g, m))


def head_delete(g: HasRules, m: AbstractSet[int]) -> SplitProgram:
    """Drop head atoms outside m; rules left without a head become denials."""
    standard, denials = [], []
    for r in g.rules:
        head = tuple(a for a in r.head if a in m)
        (standard if head else denials).append(GroundRule(head, r.pos, r.neg))
    return SplitProgram(tuple(standard), tuple(denials))


def _fresh_name(k: int) -> str:
    return f"__c{k}"


def rewrite_denials(p: Program) -> Program:
    """Replace each denial ``:- B`` by ``c(X) :- B, not c(X)`` with a fresh predicate c."""
    rules: list[Rule] = []
    k = 0
    for r in p.rules:
        if not r.is_denial:
            rules.append(r)
            continue
        k += 1
        aux = Atom(_fresh_name(k), tuple(var(v) for v in r.variables()))
        rules.append(Rule((aux,), r.body_pos, r.body_neg + (aux,)))
    return Program.build(rules, p.edb_predicates)


def project(models: Iterable[AbstractSet[int]], src: GroundProgram, dst: GroundProgram) -> set[frozenset[int]]:
    """Map models of ``src`` onto the atom ids of ``dst``, dropping atoms dst lacks."""
    out = set()
    for m in models:
        out.add(frozenset(j for j in (dst.index.get(src.atoms[i]) for i in m) if j is not None))
    return out

"""Herbrand universe, database attachment and ground instantiation."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Optional

from .syntax import Atom, Program, ProgramError, Rule, const

FALLBACK_CONSTANT = "u0"
DEFAULT_MAX_RULES = 10**6


class GroundingError(RuntimeError):
    pass


@dataclass(frozen=True)
class Database:
    relations: Mapping[str, frozenset[tuple[str, ...]]] = field(default_factory=dict)

    @classmethod
    def from_facts(cls, facts: Iterable[Atom]) -> Database:
        rel: dict[str, set[tuple[str, ...]]] = {}
        arity: dict[str, int] = {}
        for a in facts:
            if not a.is_ground:
                raise ProgramError(f"database fact {a} is not ground")
            if arity.setdefault(a.predicate, a.arity) != a.arity:
                raise ProgramError(f"relation {a.predicate} has tuples of different arity")
            rel.setdefault(a.predicate, set()).add(tuple(t.name for t in a.args))
        return cls({p: frozenset(ts) for p, ts in rel.items()})

    def facts(self) -> Iterator[Atom]:
        for p in sorted(self.relations):
            for t in sorted(self.relations[p]):
                yield Atom(p, tuple(const(c) for c in t))

    def __len__(self) -> int:
        return sum(len(ts) for ts in self.relations.values())


@dataclass(frozen=True)
class GroundRule:
    """A variable-free rule over atom ids; each component is sorted and duplicate-free."""

    head: tuple[int, ...] = ()
    pos: tuple[int, ...] = ()
    neg: tuple[int, ...] = ()

    @classmethod
    def make(cls, head: Iterable[int] = (), pos: Iterable[int] = (), neg: Iterable[int] = ()) -> GroundRule:
        return cls(tuple(sorted(set(head))), tuple(sorted(set(pos))), tuple(sorted(set(neg))))

    @property
    def is_denial(self) -> bool:
        return not self.head


@dataclass(frozen=True)
class GroundProgram:
    atoms: tuple[Atom, ...]
    rules: tuple[GroundRule, ...]
    universe: frozenset[str] = frozenset()

    @cached_property
    def index(self) -> dict[Atom, int]:
        return {a: i for i, a in enumerate(self.atoms)}

    @cached_property
    def names(self) -> tuple[str, ...]:
        return tuple(str(a) for a in self.atoms)

    def atom_id(self, atom: Atom | str) -> Optional[int]:
        if isinstance(atom, str):
            from .syntax import parse_atom
            atom = parse_atom(atom)
        return self.index.get(atom)

    def interpretation(self, atoms: Iterable[Atom | str]) -> frozenset[int]:
        """Atom ids of the named atoms; unknown atoms raise KeyError."""
        out = set()
        for a in atoms:
            i = self.atom_id(a)
            if i is None:
                raise KeyError(f"atom {a} is not in the Herbrand base")
            out.add(i)
        return frozenset(out)

    def render(self, interp: Iterable[int]) -> list[str]:
        return [self.names[i] for i in sorted(interp)]

    def with_rules(self, rules: Iterable[GroundRule]) -> GroundProgram:
        return replace(self, rules=tuple(dict.fromkeys(rules)))

    def rule_text(self, r: GroundRule) -> str:
        return str(self.to_rule(r))

    def to_rule(self, r: GroundRule) -> Rule:
        at = self.atoms
        return Rule(tuple(at[i] for i in r.head), tuple(at[i] for i in r.pos), tuple(at[i] for i in r.neg))

    def to_program(self) -> Program:
        return Program.build(self.to_rule(r) for r in self.rules)

    def __str__(self) -> str:
        return "\n".join(self.rule_text(r) for r in self.rules)


def attach_database(p: Program, d: Database) -> Program:
    """Append one fact per database tuple; EDB classification is preserved."""
    arities = p.predicates()
    extra = []
    for a in d.facts():
        if a.predicate not in p.edb_predicates:
            raise ProgramError(f"database relation {a.predicate} is not an EDB predicate of the program")
        if arities.get(a.predicate, a.arity) != a.arity:
            raise ProgramError(
                f"database relation {a.predicate} has arity {a.arity}, program uses {arities[a.predicate]}")
        extra.append(Rule((a,)))
    if not extra:
        return p
    return Program(p.rules + tuple(extra), p.edb_predicates, p.idb_predicates)


def herbrand_universe(p: Program) -> frozenset[str]:
    consts = p.constants()
    return frozenset(consts) if consts else frozenset({FALLBACK_CONSTANT})


def _match(atom: Atom, fact: tuple[str, ...], binding: dict[str, str]) -> Optional[dict[str, str]]:
    out = binding
    for t, c in zip(atom.args, fact):
        if t.is_variable:
            bound = out.get(t.name)
            if bound is None:
                if out is binding:
                    out = dict(binding)
                out[t.name] = c
            elif bound != c:
                return None
        elif t.name != c:
            return None
    return out


def _edb_facts(p: Program) -> dict[str, set[tuple[str, ...]]]:
    facts: dict[str, set[tuple[str, ...]]] = {}
    for r in p.rules:
        if r.is_fact and r.head[0].predicate in p.edb_predicates and r.head[0].is_ground:
            a = r.head[0]
            facts.setdefault(a.predicate, set()).add(tuple(t.name for t in a.args))
    return facts


def _bindings(rule: Rule, universe: list[str], facts: Optional[dict[str, set[tuple[str, ...]]]],
              edb: frozenset[str]) -> Iterator[dict[str, str]]:
    variables = rule.variables()
    if facts is None:
        for combo in itertools.product(universe, repeat=len(variables)):
            yield dict(zip(variables, combo))
        return
    joined = [a for a in rule.body_pos if a.predicate in edb]

    def join(i: int, binding: dict[str, str]) -> Iterator[dict[str, str]]:
        if i == len(joined):
            yield binding
            return
        for fact in facts.get(joined[i].predicate, ()):
            b = _match(joined[i], fact, binding)
            if b is not None:
                yield from join(i + 1, b)

    for binding in join(0, {}):
        free = [v for v in variables if v not in binding]
        for combo in itertools.product(universe, repeat=len(free)):
            yield {**binding, **dict(zip(free, combo))} if free else binding


def ground(p: Program, max_rules: int = DEFAULT_MAX_RULES, closed_edb: bool = False) -> GroundProgram:
    """Instantiate every rule over the Herbrand universe.

    With ``closed_edb`` the EDB relations are taken to be exactly the EDB facts of
    the program: positive EDB body atoms are matched against those facts and EDB
    atoms without a fact are left out of the Herbrand base (negative literals on
    them are dropped as true).  Otherwise instantiation is exhaustive.
    """
    universe = sorted(herbrand_universe(p))
    facts = _edb_facts(p) if closed_edb else None
    if facts is None:
        total = sum(len(universe) ** len(r.variables()) for r in p.rules)
        if total > max_rules:
            raise GroundingError(f"grounding would produce {total} rules, above the cap of {max_rules}")

    def known(a: Atom) -> bool:
        return a.predicate not in p.edb_predicates or tuple(t.name for t in a.args) in facts.get(a.predicate, ())

    ground_rules: list[tuple[tuple[Atom, ...], tuple[Atom, ...], tuple[Atom, ...]]] = []
    count = 0
    for r in p.rules:
        for binding in _bindings(r, universe, facts, p.edb_predicates):
            count += 1
            if count > max_rules:
                raise GroundingError(f"grounding exceeded the cap of {max_rules} rules")
            head = tuple(a.substitute(binding) for a in r.head)
            pos = tuple(a.substitute(binding) for a in r.body_pos)
            neg = tuple(a.substitute(binding) for a in r.body_neg)
            if facts is not None:
                if not all(map(known, pos)):
                    continue
                neg = tuple(a for a in neg if known(a))
            ground_rules.append((head, pos, neg))

    atoms = sorted({a for rule in ground_rules for part in rule for a in part}, key=lambda a: (str(a), a))
    index = {a: i for i, a in enumerate(atoms)}
    rules = dict.fromkeys(
        GroundRule.make((index[a] for a in h), (index[a] for a in b), (index[a] for a in n))
        for h, b, n in ground_rules
    )
    return GroundProgram(tuple(atoms), tuple(rules), frozenset(universe))


"""Brave and cautious evaluation of bound queries over a program plus database."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .grounder import DEFAULT_MAX_RULES, Database, GroundProgram, attach_database, ground
from .search import Budget, BudgetExhausted
from .solver import ModelSet, Semantics, default_budget, iter_models
from .syntax import Literal, Program, ProgramError, parse_literal, parse_program


class IncompleteError(RuntimeError):
    """The model class could not be enumerated within budget, so no verdict is possible."""


@dataclass(frozen=True)
class BoundQuery:
    program: Program
    goal: Literal

    def __post_init__(self):
        if not self.goal.atom.is_ground:
            raise ProgramError(f"query goal {self.goal} is not ground")


@dataclass(frozen=True)
class QueryVerdict:
    answer: bool
    mode: str  # "brave" | "cautious"
    semantics: Semantics
    goal: Literal
    witness: Optional[frozenset[int]] = None
    ground_program: Optional[GroundProgram] = None

    def witness_atoms(self) -> Optional[list[str]]:
        if self.witness is None or self.ground_program is None:
            return None
        return self.ground_program.render(self.witness)


def load_database(path: str | Path) -> Database:
    text = Path(path).read_text()
    program = parse_program(text, strict=False)
    facts = []
    for r in program.rules:
        if not r.is_fact:
            raise ProgramError(f"database files hold facts only, found '{r}'")
        if not r.head[0].is_ground:
            raise ProgramError(f"database fact '{r}' is not ground")
        facts.append(r.head[0])
    return Database.from_facts(facts)


def query_program(q: BoundQuery, d: Optional[Database] = None, max_rules: int = DEFAULT_MAX_RULES) -> GroundProgram:
    """Ground P_D; with a database the EDB relations are read as closed."""
    if d is None:
        return ground(q.program, max_rules)
    return ground(attach_database(q.program, d), max_rules, closed_edb=True)


def _holds(goal: Literal, g: GroundProgram, m: frozenset[int]) -> bool:
    i = g.atom_id(goal.atom)
    present = i is not None and i in m
    return present if goal.positive else not present


def check_goal(q: BoundQuery, d: Optional[Database] = None) -> None:
    pred = q.goal.atom.predicate
    if pred not in q.program.predicates() and (d is None or pred not in d.relations):
        raise ProgramError(f"query goal predicate {pred} occurs neither in the program nor in the database")


def decide(goal: Literal, g: GroundProgram, models: ModelSet, mode: str) -> QueryVerdict:
    """Brave or cautious verdict over an enumerated model set."""
    if mode not in ("brave", "cautious"):
        raise ValueError(f"unknown query mode {mode!r}")
    want = mode == "brave"
    for m in models:
        if _holds(goal, g, m) == want:
            # brave wants a model where the goal holds, cautious a counterexample
            return QueryVerdict(want, mode, models.semantics, goal, m, g)
    if models.budget_exhausted:
        raise IncompleteError(f"{mode} query undecided: model enumeration ran out of budget")
    return QueryVerdict(not want, mode, models.semantics, goal, None, g)


def _evaluate(q: BoundQuery, d: Optional[Database], kind: Semantics | str, budget: Optional[int],
              max_rules: int, mode: str) -> QueryVerdict:
    # models are drawn lazily, so the search stops at the first witness
    kind = Semantics(kind)
    check_goal(q, d)
    g = query_program(q, d, max_rules)
    want = mode == "brave"
    counter = Budget(default_budget() if budget is None else budget)
    try:
        for m in iter_models(g, kind, counter):
            if _holds(q.goal, g, m) == want:
                return QueryVerdict(want, mode, kind, q.goal, m, g)
    except BudgetExhausted:
        raise IncompleteError(f"{mode} query undecided: model enumeration ran out of budget") from None
    return QueryVerdict(not want, mode, kind, q.goal, None, g)


def brave(q: BoundQuery, d: Optional[Database] = None, kind: Semantics | str = Semantics.MF,
          budget: Optional[int] = None, max_rules: int = DEFAULT_MAX_RULES) -> QueryVerdict:
    return _evaluate(q, d, kind, budget, max_rules, "brave")


def cautious(q: BoundQuery, d: Optional[Database] = None, kind: Semantics | str = Semantics.MF,
             budget: Optional[int] = None, max_rules: int = DEFAULT_MAX_RULES) -> QueryVerdict:
    return _evaluate(q, d, kind, budget, max_rules, "cautious")


def make_query(program: Program, goal: str) -> BoundQuery:
    return BoundQuery(program, parse_literal(goal))

"""Abstract syntax, parser, validation and stratification for disjunctive datalog.

Surface grammar::

    program  := (rule ".")*
    rule     := head | head ":-" body | ":-" body
    head     := atom ("|" atom)*
    body     := lit ("," lit)*
    lit      := ["not"] atom
    atom     := IDENT ["(" term ("," term)* ")"]
    term     := IDENT | NUMBER | QUOTED | VARIABLE

Comments run from ``%`` to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Optional, TYPE_CHECKING

import networkx as nx

if TYPE_CHECKING:
    from .grounder import GroundProgram

RESERVED_PREFIX = "__"


class ProgramError(ValueError):
    """Raised for malformed programs (syntax, arity, safety, EDB misuse)."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Term:
    kind: str  # "constant" | "variable"
    name: str

    @property
    def is_variable(self) -> bool:
        return self.kind == "variable"

    def __str__(self) -> str:
        return self.name


def const(name: str) -> Term:
    return Term("constant", name)


def var(name: str) -> Term:
    return Term("variable", name)


@dataclass(frozen=True, order=True)
class Atom:
    predicate: str
    args: tuple[Term, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def is_ground(self) -> bool:
        return not any(t.is_variable for t in self.args)

    def variables(self) -> Iterator[str]:
        for t in self.args:
            if t.is_variable:
                yield t.name

    def substitute(self, binding: dict[str, str]) -> Atom:
        if self.is_ground:
            return self
        return Atom(
            self.predicate,
            tuple(const(binding[t.name]) if t.is_variable else t for t in self.args),
        )

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(t.name for t in self.args)})"


@dataclass(frozen=True)
class Literal:
    atom: Atom
    positive: bool = True

    def __neg__(self) -> Literal:
        return Literal(self.atom, not self.positive)

    def __str__(self) -> str:
        return str(self.atom) if self.positive else f"not {self.atom}"


@dataclass(frozen=True)
class Rule:
    head: tuple[Atom, ...] = ()
    body_pos: tuple[Atom, ...] = ()
    body_neg: tuple[Atom, ...] = ()

    def __post_init__(self):
        if not (self.head or self.body_pos or self.body_neg):
            raise ProgramError("a rule needs a head or a body")

    @property
    def is_denial(self) -> bool:
        return not self.head

    @property
    def is_fact(self) -> bool:
        return len(self.head) == 1 and not self.body_pos and not self.body_neg

    def atoms(self) -> Iterator[Atom]:
        yield from self.head
        yield from self.body_pos
        yield from self.body_neg

    def variables(self) -> list[str]:
        """Distinct variables in order of first occurrence."""
        seen: dict[str, None] = {}
        for a in self.atoms():
            for v in a.variables():
                seen.setdefault(v, None)
        return list(seen)

    def unsafe_variables(self) -> list[str]:
        bound = {v for a in self.body_pos for v in a.variables()}
        return [v for v in self.variables() if v not in bound]

    def __str__(self) -> str:
        head = " | ".join(map(str, self.head))
        body = ", ".join([str(a) for a in self.body_pos] + [f"not {a}" for a in self.body_neg])
        if not body:
            return f"{head}."
        if not head:
            return f":- {body}."
        return f"{head} :- {body}."


@dataclass(frozen=True)
class Program:
    rules: tuple[Rule, ...]
    edb_predicates: frozenset[str] = frozenset()
    idb_predicates: frozenset[str] = frozenset()

    @classmethod
    def build(cls, rules: Iterable[Rule], edb: Optional[Iterable[str]] = None) -> Program:
        """Create a program; EDB predicates are those never used in a head unless given."""
        rules = tuple(rules)
        preds = {a.predicate for r in rules for a in r.atoms()}
        if edb is None:
            idb = {a.predicate for r in rules for a in r.head}
            edb_set = preds - idb
        else:
            edb_set = set(edb)
            idb = preds - edb_set
        return cls(rules, frozenset(edb_set), frozenset(idb))

    def with_rules(self, rules: Iterable[Rule]) -> Program:
        rules = tuple(rules)
        preds = {a.predicate for r in rules for a in r.atoms()}
        return Program(rules, self.edb_predicates, frozenset(preds - self.edb_predicates))

    def predicates(self) -> dict[str, int]:
        """Predicate -> arity of its first occurrence."""
        out: dict[str, int] = {}
        for r in self.rules:
            for a in r.atoms():
                out.setdefault(a.predicate, a.arity)
        return out

    def constants(self) -> set[str]:
        return {t.name for r in self.rules for a in r.atoms() for t in a.args if not t.is_variable}

    def __str__(self) -> str:
        return "\n".join(str(r) for r in self.rules)


def format_program(p: Program) -> str:
    text = str(p)
    return text + "\n" if text else text


# -- parsing ----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>%[^\n]*)
  | (?P<implies>:-)
  | (?P<ident>[a-z][A-Za-z0-9_]*)
  | (?P<variable>[A-Z_][A-Za-z0-9_]*)
  | (?P<number>[0-9]+)
  | (?P<quoted>"(?:[^"\\\n]|\\.)*")
  | (?P<punct>[|,.()])
    """,
    re.VERBOSE,
)


@dataclass
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ProgramError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "variable" and m.group().startswith(RESERVED_PREFIX):
            raise ProgramError(f"identifier {m.group()!r} uses the reserved prefix '__'", line, col)
        elif kind not in ("ws", "comment"):
            tokens.append(_Token(kind, m.group(), line, col))
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def error(self, expected: str) -> ProgramError:
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        return ProgramError(f"expected {expected}, found {found}", t.line, t.column)

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind in ("punct", "implies"):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            raise self.error(repr(text))

    def rules(self) -> Iterator[tuple[Rule, _Token]]:
        while self.tok.kind != "eof":
            start = self.tok
            yield self.rule(), start

    def rule(self) -> Rule:
        head: list[Atom] = []
        if self.tok.kind != "implies":
            head.append(self.atom())
            while self.accept("|"):
                head.append(self.atom())
        pos: list[Atom] = []
        neg: list[Atom] = []
        if self.accept(":-"):
            while True:
                positive, a = self.lit()
                (pos if positive else neg).append(a)
                if not self.accept(","):
                    break
        self.expect(".")
        return Rule(tuple(head), tuple(pos), tuple(neg))

    def lit(self) -> tuple[bool, Atom]:
        t = self.tok
        if t.kind == "ident" and t.text == "not" and self.tokens[self.i + 1].kind == "ident":
            self.i += 1
            return False, self.atom()
        return True, self.atom()

    def atom(self) -> Atom:
        t = self.tok
        if t.kind != "ident":
            raise self.error("a predicate name")
        self.i += 1
        args: list[Term] = []
        if self.accept("("):
            args.append(self.term())
            while self.accept(","):
                args.append(self.term())
            self.expect(")")
        return Atom(t.text, tuple(args))

    def term(self) -> Term:
        t = self.tok
        if t.kind == "variable":
            self.i += 1
            return var(t.text)
        if t.kind in ("ident", "number", "quoted"):
            self.i += 1
            return const(t.text)
        raise self.error("a term")


def parse_program(text: str, edb: Optional[Iterable[str]] = None, strict: bool = True) -> Program:
    """Parse program text.

    With ``strict`` (the default) the first validation diagnostic is raised as
    a :class:`ProgramError`; otherwise the unchecked program is returned.
    """
    parser = _Parser(text)
    parsed = list(parser.rules())
    program = Program.build((r for r, _ in parsed), edb)
    if strict:
        diags = validate(program)
        if diags:
            d = diags[0]
            start = parsed[d.rule_index][1]
            raise ProgramError(d.message, start.line, start.column)
    return program


def parse_atom(text: str) -> Atom:
    parser = _Parser(text)
    a = parser.atom()
    if parser.tok.kind != "eof":
        raise parser.error("end of input")
    return a


def parse_literal(text: str) -> Literal:
    parser = _Parser(text)
    positive, a = parser.lit()
    if parser.tok.kind != "eof":
        raise parser.error("end of input")
    return Literal(a, positive)


# -- validation -------------------------------------------------------------

@dataclass(frozen=True)
class Diagnostic:
    kind: str  # "unsafe" | "arity" | "edb_head"
    message: str
    rule_index: int


def validate(p: Program) -> list[Diagnostic]:
    """Return diagnostics; an empty list means the program is well formed."""
    diags: list[Diagnostic] = []
    arity: dict[str, int] = {}
    for i, r in enumerate(p.rules):
        for a in r.atoms():
            seen = arity.setdefault(a.predicate, a.arity)
            if seen != a.arity:
                diags.append(Diagnostic(
                    "arity", f"predicate {a.predicate} used with arity {a.arity} and {seen}", i))
        for v in r.unsafe_variables():
            diags.append(Diagnostic(
                "unsafe", f"unsafe variable {v} in rule '{r}': it does not occur in a positive body atom", i))
        # database tuples may be stated as ground facts; anything else is a derivation
        if not (r.is_fact and r.head[0].is_ground):
            for a in r.head:
                if a.predicate in p.edb_predicates:
                    diags.append(Diagnostic(
                        "edb_head", f"EDB predicate {a.predicate} occurs in the head of rule '{r}'", i))
    return diags


# -- dependency analysis ----------------------------------------------------

@dataclass(frozen=True)
class DepGraph:
    nodes: frozenset[str]
    edges: frozenset[tuple[str, str, str]]  # (body predicate, head predicate, "pos" | "neg")

    def successors(self, p: str) -> set[str]:
        return {q for a, q, _ in self.edges if a == p}

    def reaches(self, p: str, q: str) -> bool:
        """True iff q depends on p (p -> q via one or more edges)."""
        stack, seen = list(self.successors(p)), set()
        while stack:
            n = stack.pop()
            if n == q:
                return True
            if n not in seen:
                seen.add(n)
                stack.extend(self.successors(n))
        return False

    def is_recursive(self, p: str) -> bool:
        return self.reaches(p, p)


def dependency_graph(p: Program) -> DepGraph:
    edges = set()
    for r in p.rules:
        for h in r.head:
            edges.update((b.predicate, h.predicate, "pos") for b in r.body_pos)
            edges.update((c.predicate, h.predicate, "neg") for c in r.body_neg)
    return DepGraph(frozenset(p.predicates()), frozenset(edges))


# -- stratification ---------------------------------------------------------

@dataclass(frozen=True)
class StratumMap:
    """Levels of ground atoms (by id); ``granularity`` records how they were found."""

    level: dict[int, int] = field(hash=False)
    granularity: str = "atom"

    def __getitem__(self, atom_id: int) -> int:
        return self.level[atom_id]

    def rule_level(self, rule) -> int:
        if rule.head:
            return self.level[rule.head[0]]
        return max([self.level[a] for a in rule.pos] + [self.level[a] + 1 for a in rule.neg])

    def check(self, g: GroundProgram) -> bool:
        """Check the three clause-level conditions on every head-bearing rule."""
        for r in g.rules:
            if not r.head:
                continue
            l = self.level[r.head[0]]
            if any(self.level[a] != l for a in r.head):
                return False
            if any(self.level[b] > l for b in r.pos):
                return False
            if any(self.level[c] >= l for c in r.neg):
                return False
        return True


def _level_by(g: GroundProgram, key: Callable[[int], Hashable]) -> Optional[dict[Hashable, int]]:
    # heads of one rule share a level, so their keys are merged into a single node
    parent: dict[Hashable, Hashable] = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in range(len(g.atoms)):
        find(key(a))
    for r in g.rules:
        for h in r.head[1:]:
            parent[find(key(h))] = find(key(r.head[0]))

    graph = nx.DiGraph()
    graph.add_nodes_from({find(k) for k in parent})
    for r in g.rules:
        if not r.head:
            continue
        h = find(key(r.head[0]))
        for b in r.pos:
            u = find(key(b))
            if not graph.has_edge(u, h):
                graph.add_edge(u, h, weight=0)
        for c in r.neg:
            graph.add_edge(find(key(c)), h, weight=1)

    cond = nx.condensation(graph)
    members = cond.graph["mapping"]
    for u, v, w in graph.edges(data="weight"):
        if w and members[u] == members[v]:
            return None
    comp_level: dict[int, int] = {}
    for c in nx.topological_sort(cond):
        lvl = 0
        for pred in cond.predecessors(c):
            step = max(
                graph[u][v]["weight"]
                for u in cond.nodes[pred]["members"]
                for v in graph.successors(u)
                if members[v] == c
            )
            lvl = max(lvl, comp_level[pred] + step)
        comp_level[c] = lvl
    return {k: comp_level[members[find(k)]] for k in parent}


def stratify(g: GroundProgram) -> Optional[StratumMap]:
    """Local stratification of a ground program, or None when none exists.

    Denials are ignored: their level can always be placed above their body.
    """
    by_pred = _level_by(g, lambda a: g.atoms[a].predicate)
    if by_pred is not None:
        return StratumMap({a: by_pred[g.atoms[a].predicate] for a in range(len(g.atoms))}, "predicate")
    by_atom = _level_by(g, lambda a: a)
    if by_atom is None:
        return None
    return StratumMap({a: by_atom[a] for a in range(len(g.atoms))}, "atom")

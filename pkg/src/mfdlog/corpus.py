"""Reference programs, problem encodings and random program generators."""

from __future__ import annotations

import itertools
import random
from typing import Iterable

from .grounder import Database, GroundProgram, ground
from .syntax import Atom, Program, Rule, const, parse_program

# name -> (program text, {semantics: expected models as sets of atom strings})
EXAMPLES: dict[str, tuple[str, dict[str, list[set[str]]]]] = {
    "p1": (
        "a | b | c.\n:- not a.\n:- not b.\n",
        {"mf": [{"a", "b"}], "sm": [], "mm": [{"a", "b"}]},
    ),
    "p5": (
        "a | b | c.\na :- not b, not c.\nb :- not a.\nc :- not a.\n",
        {"sm": [{"a"}, {"b", "c"}], "mf": [{"a"}, {"b", "c"}]},
    ),
    "p6": (
        "a | b | c.\na :- not b.\nb :- not c.\nc :- not a.\n",
        {"mf": [{"a", "b"}, {"a", "c"}, {"b", "c"}], "sm": []},
    ),
    "p7": (
        "eat | drink.\neat.\nthirsty :- not drink.\n",
        {"mf": [{"eat", "thirsty"}, {"eat", "drink"}], "sm": [{"eat", "thirsty"}]},
    ),
    "or": (
        "a | b.\n",
        {"mm": [{"a"}, {"b"}]},
    ),
    "or_not_c": (
        "a | b :- not c.\n",
        {"pm": [{"a"}, {"b"}], "mm": [{"a"}, {"b"}, {"c"}]},
    ),
}


def example(name: str) -> Program:
    return parse_program(EXAMPLES[name][0])


# -- encodings --------------------------------------------------------------

KERNEL_PROGRAM = """\
s(W) | sh(W) :- v(W).
:- s(W), sh(W).
q(X1,X2) :- sh(X1), s(Y), e(Y,X1), v(X2).
q(X1,X2) :- s(X1), sh(X2).
q(X1,X2) :- s(X1), s(X2), not e(X2,X1).
g :- v(X1), v(X2), not q(X1,X2).
"""

SAT3_PROGRAM = """\
val(X,true) | val(X,false) :- var(X).
:- val(X,true), val(X,false).
val(X,Vx) | val(Y,Vy) | val(Z,Vz) :- lit1(C,X,Vx), lit2(C,Y,Vy), lit3(C,Z,Vz).
:- not val(x1,true).
:- not val(x2,true).
"""


def graph_database(n_vertices: int, edges: Iterable[tuple[int, int]]) -> Database:
    facts = [Atom("v", (const(str(i)),)) for i in range(1, n_vertices + 1)]
    facts += [Atom("e", (const(str(i)), const(str(j)))) for i, j in edges]
    return Database.from_facts(facts)


def has_kernel(n_vertices: int, edges: Iterable[tuple[int, int]]) -> bool:
    """Brute-force search for an independent set absorbing every outside vertex."""
    edges = set(edges)
    vertices = range(1, n_vertices + 1)
    for size in range(n_vertices + 1):
        for chosen in itertools.combinations(vertices, size):
            s = set(chosen)
            if any((i, j) in edges for i in s for j in s):
                continue
            if all(any((j, i) in edges for j in s) for i in vertices if i not in s):
                return True
    return False


def sat3_database(n_vars: int, clauses: list[tuple[tuple[int, bool], ...]]) -> Database:
    facts = [Atom("var", (const(f"x{i}"),)) for i in range(1, n_vars + 1)]
    for c, clause in enumerate(clauses, start=1):
        for pos, (x, positive) in enumerate(clause, start=1):
            facts.append(Atom(f"lit{pos}", (const(f"c{c}"), const(f"x{x}"), const("true" if positive else "false"))))
    return Database.from_facts(facts)


def random_3sat(rng: random.Random, max_vars: int = 4, max_clauses: int = 5):
    n_vars = rng.randint(3, max_vars)
    clauses = []
    for _ in range(rng.randint(1, max_clauses)):
        xs = rng.sample(range(1, n_vars + 1), 3)
        clauses.append(tuple((x, rng.random() < 0.5) for x in xs))
    return n_vars, clauses


def sat3_assignments(n_vars: int, clauses) -> list[dict[int, bool]]:
    """Truth-table enumeration of satisfying assignments with x1 and x2 true."""
    out = []
    for values in itertools.product((False, True), repeat=n_vars):
        assign = dict(zip(range(1, n_vars + 1), values))
        if assign[1] and assign[2] and all(any(assign[x] == pos for x, pos in c) for c in clauses):
            out.append(assign)
    return out


def random_digraph(rng: random.Random, n_vertices: int, p: float = 0.3) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, n_vertices + 1) for j in range(1, n_vertices + 1) if rng.random() < p]


def all_digraphs(n_vertices: int) -> Iterable[list[tuple[int, int]]]:
    pairs = [(i, j) for i in range(1, n_vertices + 1) for j in range(1, n_vertices + 1)]
    for bits in range(1 << len(pairs)):
        yield [pr for k, pr in enumerate(pairs) if bits >> k & 1]


def digraphs_up_to_isomorphism(n_vertices: int) -> list[list[tuple[int, int]]]:
    """One representative per isomorphism class, via the least adjacency bitmask over all relabellings."""
    pairs = [(i, j) for i in range(n_vertices) for j in range(n_vertices)]
    where = {pr: k for k, pr in enumerate(pairs)}
    perms = [[where[p[i], p[j]] for i, j in pairs] for p in itertools.permutations(range(n_vertices))]
    classes = set()
    for bits in range(1 << len(pairs)):
        classes.add(min(sum(1 << t for k, t in enumerate(pm) if bits >> k & 1) for pm in perms))
    return [[(i + 1, j + 1) for k, (i, j) in enumerate(pairs) if bits >> k & 1] for bits in sorted(classes)]


# -- random propositional programs ------------------------------------------

def random_program(rng: random.Random, n_atoms: int = 8, n_rules: int = 12, max_head: int = 3,
                   max_body: int = 3, denial_rate: float = 0.2, neg_rate: float = 0.4,
                   normal: bool = False, positive: bool = False) -> Program:
    """A random ground program over atoms p0..p{n-1}.

    ``normal`` restricts heads to one atom, ``positive`` forbids negation.
    """
    names = [Atom(f"p{i}") for i in range(n_atoms)]
    rules = []
    for _ in range(rng.randint(1, n_rules)):
        if rng.random() < denial_rate:
            head = ()
        else:
            width = 1 if normal else rng.randint(1, max_head)
            head = tuple(rng.sample(names, min(width, n_atoms)))
        body_size = rng.randint(1 if not head else 0, max_body)
        body = rng.sample(names, min(body_size, n_atoms))
        pos, neg = [], []
        for a in body:
            (neg if not positive and rng.random() < neg_rate else pos).append(a)
        rules.append(Rule(head, tuple(pos), tuple(neg)))
    return Program.build(rules)


def random_ground(rng: random.Random, **kwargs) -> GroundProgram:
    return ground(random_program(rng, **kwargs))


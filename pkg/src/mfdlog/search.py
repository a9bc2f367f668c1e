"""Backtracking model search with unit propagation.

A ground rule ``H :- B+, not B-`` is satisfied exactly when the clause
``H or B- or (not B+)`` holds, so models of a program are the satisfying
assignments of its rule clauses.  Atoms are decided false-first along a fixed
order.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional, Sequence

from .grounder import GroundRule

Clause = tuple[tuple[int, ...], tuple[int, ...]]  # (atoms that satisfy when true, atoms that satisfy when false)


class BudgetExhausted(Exception):
    pass


class Budget:
    """Counts search nodes; ``limit=None`` is unbounded."""

    def __init__(self, limit: Optional[int] = None):
        self.limit = limit
        self.used = 0

    def tick(self) -> None:
        self.used += 1
        if self.limit is not None and self.used > self.limit:
            raise BudgetExhausted(f"search budget of {self.limit} nodes exhausted")


def rule_clauses(rules: Iterable[GroundRule]) -> list[Clause]:
    return [(tuple(r.head) + tuple(r.neg), tuple(r.pos)) for r in rules]


class ClauseSearch:
    def __init__(self, n_atoms: int, clauses: Sequence[Clause], order: Optional[Sequence[int]] = None,
                 fixed_false: Iterable[int] = (), budget: Optional[Budget] = None):
        self.n = n_atoms
        self.clauses: list[Clause] = list(clauses)
        self.order = list(range(n_atoms)) if order is None else list(order)
        self.budget = budget or Budget()
        self.val = [-1] * n_atoms
        self.pos_occ: list[list[int]] = [[] for _ in range(n_atoms)]
        self.neg_occ: list[list[int]] = [[] for _ in range(n_atoms)]
        for ci, (pos, neg) in enumerate(self.clauses):
            self._index(ci, pos, neg)
        self.static = len(self.clauses)
        self.short = [ci for ci, (pos, neg) in enumerate(self.clauses) if len(pos) + len(neg) <= 1]
        self.fixed_false = tuple(fixed_false)

    def _index(self, ci: int, pos, neg) -> None:
        for a in pos:
            self.pos_occ[a].append(ci)
        for a in neg:
            self.neg_occ[a].append(ci)

    def add_clause(self, pos: Iterable[int], neg: Iterable[int]) -> None:
        """Add a clause mid-search; it constrains every model reported afterwards."""
        pos, neg = tuple(pos), tuple(neg)
        self.clauses.append((pos, neg))
        self._index(len(self.clauses) - 1, pos, neg)

    def pop_clause(self) -> None:
        """Remove the most recently added clause."""
        pos, neg = self.clauses.pop()
        for a in pos:
            self.pos_occ[a].pop()
        for a in neg:
            self.neg_occ[a].pop()

    def _holds(self, ci: int) -> bool:
        pos, neg = self.clauses[ci]
        val = self.val
        return any(val[a] == 1 for a in pos) or any(val[a] == 0 for a in neg)

    def _falsified(self, ci: int) -> bool:
        pos, neg = self.clauses[ci]
        val = self.val
        return all(val[a] == 0 for a in pos) and all(val[a] == 1 for a in neg)

    def _propagate(self, trail: list[int], start: int) -> bool:
        val = self.val
        i = start
        while i < len(trail):
            a = trail[i]
            i += 1
            watch = self.neg_occ[a] if val[a] == 1 else self.pos_occ[a]
            for ci in watch:
                pos, neg = self.clauses[ci]
                free = -1
                free_val = 0
                n_free = 0
                sat = False
                for p in pos:
                    v = val[p]
                    if v == 1:
                        sat = True
                        break
                    if v == -1:
                        n_free += 1
                        free, free_val = p, 1
                if sat:
                    continue
                for q in neg:
                    v = val[q]
                    if v == 0:
                        sat = True
                        break
                    if v == -1:
                        n_free += 1
                        free, free_val = q, 0
                if sat:
                    continue
                if n_free == 0:
                    return False
                if n_free == 1:
                    val[free] = free_val
                    trail.append(free)
        return True

    def _undo(self, trail: list[int], mark: int) -> None:
        val = self.val
        while len(trail) > mark:
            val[trail.pop()] = -1

    def _root(self, trail: list[int]) -> bool:
        for a in self.fixed_false:
            if self.val[a] == 1:
                return False
            if self.val[a] == -1:
                self.val[a] = 0
                trail.append(a)
        if not self._propagate(trail, 0):
            return False
        # clauses with at most one literal never get a falsified literal to trigger them
        for ci in self.short + list(range(self.static, len(self.clauses))):
            pos, neg = self.clauses[ci]
            if len(pos) + len(neg) > 1 or self._holds(ci):
                continue
            free = [(a, 1) for a in pos if self.val[a] == -1] + [(a, 0) for a in neg if self.val[a] == -1]
            if not free:
                return False
            mark = len(trail)
            a, v = free[0]
            self.val[a] = v
            trail.append(a)
            if not self._propagate(trail, mark):
                return False
        return True

    def models(self) -> Iterator[frozenset[int]]:
        """Yield every model (as the set of true atoms) in false-first order."""
        trail: list[int] = []
        try:
            if self._root(trail):
                yield from self._dfs(0, trail)
        finally:
            self._undo(trail, 0)

    def _dfs(self, k: int, trail: list[int]) -> Iterator[frozenset[int]]:
        self.budget.tick()
        val, order = self.val, self.order
        while k < len(order) and val[order[k]] != -1:
            k += 1
        if k == len(order):
            if all(self._holds(ci) for ci in range(self.static, len(self.clauses))):
                yield frozenset(a for a in range(self.n) if val[a] == 1)
            return
        a = order[k]
        for v in (0, 1):
            mark, before = len(trail), len(self.clauses)
            val[a] = v
            trail.append(a)
            if self._propagate(trail, mark):
                yield from self._dfs(k + 1, trail)
            self._undo(trail, mark)
            # a clause added below may already be falsified by this prefix
            if any(self._falsified(ci) for ci in range(before, len(self.clauses))):
                return

    def first(self) -> Optional[frozenset[int]]:
        gen = self.models()
        try:
            return next(gen, None)
        finally:
            gen.close()


class SubsetSearch:
    """Repeated searches for models strictly inside a given set, sharing one clause index."""

    def __init__(self, n_atoms: int, rules: Iterable[GroundRule], order: Optional[Sequence[int]] = None):
        self.n = n_atoms
        self.order = list(range(n_atoms)) if order is None else list(order)
        self.search = ClauseSearch(n_atoms, rule_clauses(rules), self.order)

    def smaller(self, m: frozenset[int], budget: Optional[Budget] = None) -> Optional[frozenset[int]]:
        """A model that is a proper subset of m, or None."""
        if not m:
            return None
        search = self.search
        search.budget = budget or Budget()
        search.fixed_false = tuple(a for a in range(self.n) if a not in m)
        search.order = [a for a in self.order if a in m]
        search.add_clause((), sorted(m))
        try:
            return search.first()
        finally:
            search.pop_clause()


def smaller_model(n_atoms: int, rules: Iterable[GroundRule], m: frozenset[int],
                  order: Optional[Sequence[int]] = None, budget: Optional[Budget] = None) -> Optional[frozenset[int]]:
    """A model of ``rules`` that is a proper subset of m, or None."""
    return SubsetSearch(n_atoms, rules, order).smaller(m, budget)

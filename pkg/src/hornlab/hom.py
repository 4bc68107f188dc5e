"""Homomorphism search: existence, enumeration and colourability.

One backtracking engine serves every caller.  Domains are bitmasks over
target indices; every source tuple is a table constraint whose allowed
rows are the target tuples compatible with its repeated-variable pattern.
Generalized arc consistency is enforced before search and after every
assignment (maintained arc consistency).
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterator, Mapping

from .analysis import shadow_graph
from .core import Homomorphism, KStructure, to_kstructure
from .errors import BudgetExhausted, MixedArity

__all__ = ["Budget", "HomSet", "hom_exists", "hom_enumerate", "hom_count", "colourable", "complete_structure"]


@dataclass(frozen=True)
class Budget:
    max_nodes: int = 10**7
    max_seconds: float = 60.0


DEFAULT_BUDGET = Budget()


class _Search:
    def __init__(self, source: KStructure, target: KStructure, budget: Budget, pinned: Mapping[int, int] | None):
        if source.k != target.k:
            raise MixedArity(f"arity {source.k} vs {target.k}")
        self.n = len(source)
        self.budget = budget
        self.nodes = 0
        self.deadline = time.monotonic() + budget.max_seconds
        full = (1 << len(target)) - 1

        # one table constraint per distinct variable pattern
        tables: dict[tuple[int, ...], set[tuple[int, ...]]] = {}
        pattern_rows: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
        for t in source.tuples:
            scope = tuple(dict.fromkeys(t))
            shape = tuple(scope.index(x) for x in t)
            if shape not in pattern_rows:
                rows = []
                for row in target.tuples:
                    vals: list[int] = [-1] * len(scope)
                    for pos, slot in enumerate(shape):
                        if vals[slot] < 0:
                            vals[slot] = row[pos]
                        elif vals[slot] != row[pos]:
                            break
                    else:
                        rows.append(tuple(vals))
                pattern_rows[shape] = rows
            allowed = set(pattern_rows[shape])
            # one scope under two patterns, e.g. (a,b,a) and (a,b,b): both must hold
            tables[scope] = tables[scope] & allowed if scope in tables else allowed
        self.constraints = [(scope, tuple(sorted(rows))) for scope, rows in tables.items()]
        self.watch: list[list[int]] = [[] for _ in range(self.n)]
        for ci, (scope, _) in enumerate(self.constraints):
            for v in scope:
                self.watch[v].append(ci)

        self.domains = [full] * self.n
        for v, val in (pinned or {}).items():
            self.domains[v] &= 1 << val

        adj = shadow_graph(source)
        self.order = sorted(range(self.n), key=lambda v: (-len(adj[v]), v))

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.budget.max_nodes:
            raise BudgetExhausted(f"node budget {self.budget.max_nodes} exhausted")
        if self.nodes & 1023 == 0 and time.monotonic() > self.deadline:
            raise BudgetExhausted(f"time budget {self.budget.max_seconds}s exhausted")

    def _propagate(self, domains: list[int], queue: list[int]) -> bool:
        pending = set(queue)
        queue = list(queue)
        while queue:
            ci = queue.pop()
            pending.discard(ci)
            scope, rows = self.constraints[ci]
            support = [0] * len(scope)
            doms = [domains[v] for v in scope]
            for row in rows:
                for d, val in zip(doms, row):
                    if not (d >> val) & 1:
                        break
                else:
                    for i, val in enumerate(row):
                        support[i] |= 1 << val
            for v, d, sup in zip(scope, doms, support):
                nd = d & sup
                if nd != d:
                    if not nd:
                        return False
                    domains[v] = nd
                    for cj in self.watch[v]:
                        if cj != ci and cj not in pending:
                            pending.add(cj)
                            queue.append(cj)
        return True

    def solutions(self) -> Iterator[tuple[int, ...]]:
        domains = list(self.domains)
        if any(d == 0 for d in domains):
            return
        if not self._propagate(domains, list(range(len(self.constraints)))):
            return
        yield from self._search(domains, 0)

    def _search(self, domains: list[int], depth: int) -> Iterator[tuple[int, ...]]:
        if depth == self.n:
            yield tuple(d.bit_length() - 1 for d in domains)
            return
        v = self.order[depth]
        d = domains[v]
        while d:
            low = d & -d
            d ^= low
            self._tick()
            child = list(domains)
            child[v] = low
            if self._propagate(child, self.watch[v]):
                yield from self._search(child, depth + 1)


def _pins(source: KStructure, target: KStructure, pinned: Mapping[str, str] | None) -> dict[int, int] | None:
    if not pinned:
        return None
    return {source.index[a]: target.index[b] for a, b in pinned.items()}


def hom_exists(
    source: KStructure,
    target: KStructure,
    budget: Budget = DEFAULT_BUDGET,
    pinned: Mapping[str, str] | None = None,
) -> Homomorphism | None:
    """First homomorphism in canonical search order, or None after an exhaustive search.

    ``pinned`` fixes the images of some source elements.  Raises
    BudgetExhausted rather than answering None when the budget runs out.
    """
    search = _Search(source, target, budget, _pins(source, target, pinned))
    for sol in search.solutions():
        return Homomorphism(source, target, sol)
    return None


@dataclass(frozen=True)
class HomSet:
    source: KStructure
    target: KStructure
    homs: tuple[Homomorphism, ...]
    complete: bool

    def __len__(self):
        return len(self.homs)

    def __iter__(self):
        return iter(self.homs)


def hom_enumerate(
    source: KStructure,
    target: KStructure,
    cap: int | None = None,
    budget: Budget = DEFAULT_BUDGET,
    pinned: Mapping[str, str] | None = None,
) -> HomSet:
    search = _Search(source, target, budget, _pins(source, target, pinned))
    found = []
    complete = True
    for sol in search.solutions():
        if cap is not None and len(found) >= cap:
            complete = False
            break
        found.append(Homomorphism(source, target, sol))
    return HomSet(source, target, tuple(found), complete)


def hom_count(source: KStructure, target: KStructure, budget: Budget = DEFAULT_BUDGET, pinned=None) -> int:
    search = _Search(source, target, budget, _pins(source, target, pinned))
    return sum(1 for _ in search.solutions())


def complete_structure(n: int, k: int) -> KStructure:
    from .generators.standard import complete_hypergraph

    return to_kstructure(complete_hypergraph(n, k), k)


def colourable(s: KStructure, n: int, budget: Budget = DEFAULT_BUDGET) -> Homomorphism | None:
    """An n-colouring as a homomorphism into ``K_n^(k)``, or None."""
    return hom_exists(s, complete_structure(n, s.k), budget)

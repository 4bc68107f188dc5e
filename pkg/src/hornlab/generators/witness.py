"""Seeded searches for sparse witnesses, each re-verified before it is returned.

Existence of every object searched for here is a theorem, but none of the
searches is guaranteed to succeed within a fixed budget: running out
raises BudgetExhausted and says nothing about existence.

Candidates are drawn as uniform random k-subsets on v vertices with
``ceil(c * v)`` edges, c sweeping 1.0..3.0 and v sweeping the budget's
vertex range, then repaired by deleting the most recently drawn edge of a
shortest short cycle until none is left.  Candidate i is drawn from its own
RNG seeded by ``(seed, i)``, so outcomes depend only on the parameters.
"""
from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Iterator

from ..analysis import chromatic_number, colouring, girth, is_hyperforest, shortest_cycle
from ..core import Hypergraph, KStructure, disjoint_union, induced_substructure, to_hypergraph, to_kstructure
from ..errors import BudgetExhausted, PreconditionFailed
from ..hom import Budget, colourable, hom_exists
from ..membership import member
from .standard import fano_plane

__all__ = [
    "SearchBudget",
    "high_chromatic_sparse",
    "sparse_incomparability",
    "density_checks",
    "density_witness",
    "NfaReport",
    "nfa_witness",
]

DENSITIES = (1.0, 1.5, 2.0, 2.5, 3.0)


@dataclass(frozen=True)
class SearchBudget:
    seed: int = 0
    max_candidates: int = 10**5
    # inclusive vertex-count sweep; None picks (k + 2, 8k)
    vertex_range: tuple[int, int] | None = None
    max_seconds: float = 300.0
    hom: Budget = field(default_factory=lambda: Budget(max_nodes=10**6, max_seconds=30.0))

    def vertices_for(self, k: int) -> range:
        lo, hi = self.vertex_range or (k + 2, 8 * k)
        return range(max(lo, k), hi + 1)


def _short_cycle(h: Hypergraph, ell: int, strict: bool):
    c = shortest_cycle(h)
    if c is None:
        return None
    too_short = len(c) <= ell if strict else len(c) < ell
    return c if too_short else None


def _girth_ok(h: Hypergraph, ell: int, strict: bool) -> bool:
    g = girth(h)
    return g > ell if strict else g >= ell


def _compact(v: int, edges: list[frozenset[int]]) -> Hypergraph:
    """Drop isolated vertices and renumber the rest 0..n-1."""
    used = sorted(set().union(*edges)) if edges else []
    ren = {old: new for new, old in enumerate(used)}
    return Hypergraph(tuple(str(i) for i in range(len(used))), frozenset(frozenset(ren[x] for x in e) for e in edges))


def _candidates(k: int, ell: int, strict: bool, budget: SearchBudget) -> Iterator[Hypergraph]:
    schedule = [(v, c) for v in budget.vertices_for(k) for c in DENSITIES]
    deadline = time.monotonic() + budget.max_seconds
    for idx in range(budget.max_candidates):
        if time.monotonic() > deadline:
            break
        v, c = schedule[idx % len(schedule)]
        rng = random.Random(f"{budget.seed}:{idx}")
        m = min(math.ceil(c * v), math.comb(v, k))
        drawn: list[frozenset[int]] = []
        seen = set()
        while len(drawn) < m:
            e = frozenset(rng.sample(range(v), k))
            if e not in seen:
                seen.add(e)
                drawn.append(e)
        age = {e: i for i, e in enumerate(drawn)}
        live = set(drawn)
        while True:
            h = Hypergraph(tuple(str(i) for i in range(v)), frozenset(live))
            cyc = _short_cycle(h, ell, strict)
            if cyc is None:
                break
            live.discard(max(cyc.edges, key=age.__getitem__))
        if live:
            yield _compact(v, sorted(live, key=age.__getitem__))
    raise BudgetExhausted(f"no witness among {budget.max_candidates} candidates / {budget.max_seconds}s")


def _search(k, ell, strict, budget, accept: Callable[[Hypergraph], bool]) -> Hypergraph:
    if budget.max_candidates <= 0:
        raise BudgetExhausted("candidate budget is zero")
    for h in _candidates(k, ell, strict, budget):
        if accept(h):
            return h
    raise BudgetExhausted("unreachable")  # _candidates raises on exhaustion


def _not_colourable_verified(h: Hypergraph, k: int, n: int, budget: Budget) -> bool:
    # second route: hom into K_n^(k) instead of the colouring branch and bound
    return colourable(to_kstructure(h, k), n, budget) is None


def high_chromatic_sparse(
    k: int,
    girth_above: int,
    not_colourable: int,
    budget: SearchBudget = SearchBudget(),
    strict: bool = True,
    use_fixture: bool = False,
) -> Hypergraph:
    """A k-uniform hypergraph with girth above ``girth_above`` that is not ``not_colourable``-colourable.

    ``strict=False`` relaxes the girth test to ``>=``.  ``use_fixture`` lets
    the Fano plane answer (3, 2, 2)-type requests directly; it still goes
    through the verifier.
    """
    if k < 2 or girth_above < 2 or not_colourable < 1:
        raise ValueError("need k >= 2, girth_above >= 2 and not_colourable >= 1")
    n = not_colourable

    def verified(h: Hypergraph) -> bool:
        return h.is_uniform(k) and _girth_ok(h, girth_above, strict) and _not_colourable_verified(h, k, n, budget.hom)

    if use_fixture and k == 3:
        fano = fano_plane()
        if verified(fano):
            return fano

    def accept(h: Hypergraph) -> bool:
        return colouring(h, n) is None and verified(h)

    return _search(k, girth_above, strict, budget, accept)


def sparse_incomparability(
    h1: KStructure, h2: KStructure, ell: int, budget: SearchBudget = SearchBudget(), strict: bool = True
) -> KStructure:
    """A k-uniform structure of girth above ``ell`` mapping to h2 but not to h1."""
    if h1.k != h2.k:
        raise PreconditionFailed("h1 and h2 must share the arity")
    if budget.max_candidates <= 0:
        raise BudgetExhausted("candidate budget is zero")
    if hom_exists(h2, h1, budget.hom) is not None:
        raise PreconditionFailed("h2 maps into h1, so no such witness exists")
    k = h2.k

    def checks(h: Hypergraph) -> bool:
        s = to_kstructure(h, k)
        return (
            h.is_uniform(k)
            and _girth_ok(h, ell, strict)
            and hom_exists(s, h2, budget.hom) is not None
            and hom_exists(s, h1, budget.hom) is None
        )

    found = _search(k, ell, strict, budget, checks)
    return to_kstructure(found, k)


def density_checks(g1: KStructure, g2: KStructure, h: KStructure, budget: Budget = Budget()) -> dict[str, bool]:
    return {
        "g1_to_h": hom_exists(g1, h, budget) is not None,
        "h_to_g2": hom_exists(h, g2, budget) is not None,
        "h_not_to_g1": hom_exists(h, g1, budget) is None,
        "g2_not_to_h": hom_exists(g2, h, budget) is None,
    }


def density_witness(g1: KStructure, g2: KStructure, budget: SearchBudget = SearchBudget()) -> KStructure:
    """A structure strictly between g1 < g2 in the homomorphism order.

    The sparse part maps to g2 but not g1 and has girth above ``|g2| + 1``,
    so g2 cannot map into it; adding a copy of g1 puts g1 below.
    """
    if not g1.relation or not g2.relation:
        raise PreconditionFailed("both structures need at least one hyperedge")
    if hom_exists(g1, g2, budget.hom) is None:
        raise PreconditionFailed("g1 does not map into g2")
    if hom_exists(g2, g1, budget.hom) is not None:
        raise PreconditionFailed("g2 maps into g1")
    sharp = sparse_incomparability(g1, g2, len(g2) + 1, budget)
    h = disjoint_union([sharp, g1], tags=["sparse", "g1"]).structure
    checks = density_checks(g1, g2, h, budget.hom)
    if not all(checks.values()):
        raise AssertionError(f"density witness failed re-verification: {checks}")
    return h


@dataclass
class NfaReport:
    witness: Hypergraph
    k: int
    radius: int
    template_chromatic: int
    witness_girth: float
    no_hom_into_template: bool
    exhaustive: bool
    subsets_checked: int
    all_hyperforests: bool
    all_members: bool
    failures: list[list[str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.no_hom_into_template and self.all_hyperforests and self.all_members

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "n": self.radius,
            "template_chromatic": self.template_chromatic,
            "witness_vertices": len(self.witness.vertices),
            "witness_edges": len(self.witness.edges),
            "witness_girth": None if self.witness_girth == math.inf else self.witness_girth,
            "no_hom_into_template": self.no_hom_into_template,
            "exhaustive": self.exhaustive,
            "subsets_checked": self.subsets_checked,
            "all_hyperforests": self.all_hyperforests,
            "all_members": self.all_members,
            "failures": self.failures,
            "ok": self.ok,
        }


def nfa_witness(
    m: KStructure,
    n: int,
    budget: SearchBudget = SearchBudget(),
    exhaust_limit: int = 5000,
    sample_size: int = 500,
    use_fixture: bool = False,
) -> NfaReport:
    """A hypergraph outside SP(m) whose n-element substructures all lie inside it.

    The witness has chromatic number above m's and girth above n, so every
    n-element induced substructure is a hyperforest; each of those is
    checked for membership in SP(E), E the substructure on a smallest edge
    of m.  Above ``exhaust_limit`` subsets a seeded sample is checked.
    """
    if not m.loop_free or not m.relation:
        raise PreconditionFailed("template must be loop-free with at least one hyperedge")
    if not m.set_closed:
        raise PreconditionFailed("template must be set-closed")
    k = m.k
    chi = chromatic_number(to_hypergraph(m), cap=len(m))
    u = high_chromatic_sparse(k, n, chi, budget, use_fixture=use_fixture)
    us = to_kstructure(u, k)
    smallest = min(m.underlying_sets, key=lambda e: (len(e), sorted(e)))
    edge_template = induced_substructure(m, [m.universe[i] for i in smallest])

    total = math.comb(len(u.vertices), n)
    exhaustive = total <= exhaust_limit
    if exhaustive:
        subsets = itertools.combinations(u.vertices, n)
    else:
        rng = random.Random(f"{budget.seed}:nfa")
        subsets = (tuple(rng.sample(u.vertices, n)) for _ in range(sample_size))
    checked, forests, members, failures = 0, True, True, []
    for sub in subsets:
        s = induced_substructure(us, sub)
        forest = is_hyperforest(to_hypergraph(s))
        ok = member(s, [edge_template], budget.hom).member
        forests &= forest
        members &= ok
        if not (forest and ok):
            failures.append(list(sub))
        checked += 1
    return NfaReport(
        witness=u,
        k=k,
        radius=n,
        template_chromatic=chi,
        witness_girth=girth(u),
        no_hom_into_template=hom_exists(us, m, budget.hom) is None,
        exhaustive=exhaustive,
        subsets_checked=checked,
        all_hyperforests=forests,
        all_members=members,
        failures=failures,
    )

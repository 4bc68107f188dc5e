"""Cyclic polymorphisms and the bipartite / NP-complete dichotomy classifier.

A cyclic p-ary operation is fixed by its values on necklace classes
(orbits of p-tuples under rotation).  Such an operation is a polymorphism
of A exactly when it induces a homomorphism from the quotient of ``A^p``
by the shift into A, so the search reuses the homomorphism engine.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .analysis import odd_cycle
from .core import KStructure
from .errors import BudgetExhausted, HasLoop, HornlabError, MinCardinalityNotAbove2, NoSuchSequence, NotSetClosed
from .hom import DEFAULT_BUDGET, Budget, hom_exists

__all__ = [
    "least_rotation",
    "necklace_classes",
    "necklace_quotient",
    "shift_is_automorphism",
    "CyclicOpTable",
    "cyclic_polymorphism",
    "exhaustive_table_search",
    "derive_sim",
    "nae_sequence",
    "max_cyclic_run",
    "replay_sequence_argument",
    "next_prime",
    "Classification",
    "classify",
]

# ExhaustiveSearch enumerates raw tables up to this many, then falls back to the quotient search
TABLE_LIMIT = 4096
# quotient construction enumerates |r|^p column choices
QUOTIENT_LIMIT = 3 * 10**5


def least_rotation(t: Sequence[int]) -> tuple[int, ...]:
    t = tuple(t)
    return min(t[i:] + t[:i] for i in range(len(t))) if t else t


def necklace_classes(n: int, p: int) -> list[tuple[int, ...]]:
    """Canonical representatives (least rotations) of p-tuples over ``range(n)``, in lexicographic order."""
    return [t for t in itertools.product(range(n), repeat=p) if least_rotation(t) == t]


def _class_name(s: KStructure, rep: Sequence[int]) -> str:
    return "<" + ",".join(s.universe[i] for i in rep) + ">"


def necklace_quotient(s: KStructure, p: int) -> tuple[KStructure, list[tuple[int, ...]]]:
    """Quotient of ``s^p`` by the cyclic shift.

    A k-tuple of classes is related when some representatives are related
    coordinatewise in the power.
    """
    if p < 2:
        raise ValueError("arity p must be at least 2")
    n, k = len(s), s.k
    classes = necklace_classes(n, p)
    pos = {c: i for i, c in enumerate(classes)}
    # class of every p-tuple, addressed by its base-n code
    class_of = [pos[least_rotation(t)] for t in itertools.product(range(n), repeat=p)]
    rel = set()
    # grow the k row codes one column at a time, merging equal partial states
    states = {(0,) * k}
    for _ in range(p):
        states = {tuple(r * n + c[j] for j, r in enumerate(st)) for st in states for c in s.tuples}
    for st in states:
        rel.add(tuple(class_of[r] for r in st))
    quotient = KStructure(s.k, tuple(_class_name(s, c) for c in classes), frozenset(rel))
    return quotient, classes


def _rotate(t: tuple[int, ...]) -> tuple[int, ...]:
    return t[1:] + t[:1]


def shift_is_automorphism(s: KStructure, p: int) -> bool:
    """Check directly on the materialized power that rotating coordinates is an automorphism."""
    from .core import direct_power

    power = direct_power(s, p)
    n = len(s)
    coords = list(itertools.product(range(n), repeat=p))
    index = {c: i for i, c in enumerate(coords)}
    shift = [index[_rotate(c)] for c in coords]
    if len(set(shift)) != len(shift):
        return False
    image = {tuple(shift[i] for i in t) for t in power.relation}
    return image == set(power.relation)


@dataclass(frozen=True)
class CyclicOpTable:
    base: KStructure
    arity: int
    classes: tuple[tuple[int, ...], ...]
    values: tuple[int, ...]

    @cached_property
    def _lookup(self) -> dict[tuple[int, ...], int]:
        return dict(zip(self.classes, self.values))

    def __call__(self, args: Sequence[int]) -> int:
        return self._lookup[least_rotation(args)]

    def is_cyclic(self) -> bool:
        look = self._lookup
        return all(
            look[least_rotation(t)] == look[least_rotation(_rotate(t))]
            for t in itertools.product(range(len(self.base)), repeat=self.arity)
        )

    def is_idempotent(self) -> bool:
        return all(self((x,) * self.arity) == x for x in range(len(self.base)))

    def violation(self) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]] | None:
        """First argument-column choice whose image leaves the relation, with that image."""
        look, rel = self._lookup, self.base.relation
        for cols in itertools.product(self.base.tuples, repeat=self.arity):
            image = tuple(look[least_rotation([c[j] for c in cols])] for j in range(self.base.k))
            if image not in rel:
                return cols, image
        return None

    def is_polymorphism(self) -> bool:
        return self.violation() is None

    def to_json(self) -> dict:
        return {
            "arity": self.arity,
            "table": {_class_name(self.base, c): self.base.universe[v] for c, v in zip(self.classes, self.values)},
        }


def cyclic_polymorphism(
    s: KStructure, p: int, budget: Budget = DEFAULT_BUDGET, idempotent: bool = False
) -> CyclicOpTable | None:
    quotient, classes = necklace_quotient(s, p)
    pins = None
    if idempotent:
        pins = {_class_name(s, (x,) * p): s.universe[x] for x in range(len(s))}
    h = hom_exists(quotient, s, budget, pinned=pins)
    if h is None:
        return None
    return CyclicOpTable(s, p, tuple(classes), h.mapping)


def exhaustive_table_search(s: KStructure, p: int, idempotent: bool = False) -> tuple[list[CyclicOpTable], list[dict]]:
    """Try every cyclic table; return the polymorphisms and a replayable transcript.

    Each transcript entry records the table and, for failures, the argument
    columns together with their image outside the relation.
    """
    classes = tuple(necklace_classes(len(s), p))
    found, transcript = [], []
    for values in itertools.product(range(len(s)), repeat=len(classes)):
        table = CyclicOpTable(s, p, classes, values)
        if idempotent and not table.is_idempotent():
            continue
        bad = table.violation()
        transcript.append({"values": list(values), "columns": None if bad is None else [list(c) for c in bad[0]],
                           "image": None if bad is None else list(bad[1])})
        if bad is None:
            found.append(table)
    return found, transcript


def derive_sim(s: KStructure) -> KStructure:
    """The graph defined by ``exists x3..xd (x1, x2, x3, .., x_{d-1}, x_d, .., x_d) in r``.

    d is the least hyperedge cardinality; the formula holds exactly on pairs
    inside a hyperedge of size d, so the result is a union of d-cliques.
    """
    if not s.set_closed:
        raise NotSetClosed("derive_sim needs a set-closed structure")
    if not s.loop_free:
        raise HasLoop("derive_sim needs a loop-free structure")
    d = s.c_min
    if d is None or d <= 2:
        raise MinCardinalityNotAbove2(f"least hyperedge cardinality is {d}")
    k = s.k
    pairs = set()
    for t in s.relation:
        # positions d-1 .. k-1 all carry x_d
        if all(t[i] == t[d - 1] for i in range(d - 1, k)):
            pairs.add((t[0], t[1]))
    return KStructure(2, s.universe, frozenset(pairs))


def max_cyclic_run(seq: Sequence[int]) -> int:
    n = len(seq)
    if n == 0:
        return 0
    if all(x == seq[0] for x in seq):
        return n
    best = run = 0
    # start just after a change so wrap-around runs are counted once
    start = next(i for i in range(n) if seq[i] != seq[i - 1])
    for j in range(n):
        i = (start + j) % n
        run = run + 1 if j > 0 and seq[i] == seq[i - 1] else 1
        best = max(best, run)
    return best


def nae_sequence(p: int, k: int) -> tuple[int, ...]:
    """A 0/1 sequence of length p with no cyclic run of k equal symbols."""
    if p < 2 or k < 2:
        raise ValueError("need p >= 2 and k >= 2")
    if p % 2 == 0:
        seq = (0, 1) * (p // 2)
    elif k == 2:
        raise NoSuchSequence("an odd cycle cannot alternate")
    else:
        seq = (0, 0) + (1, 0) * ((p - 3) // 2) + (1,)
    assert max_cyclic_run(seq) < k
    return seq


def replay_sequence_argument(s: KStructure, table: CyclicOpTable, sequence: Sequence[int], edge: tuple[int, int]) -> dict:
    """Rotate the sequence k times into rows, feed the columns to the table.

    Cyclicity makes every row evaluate to the same element a, while every
    column is a relation tuple on the 2-element edge; a polymorphism would
    therefore put the constant tuple (a, .., a) in the relation.
    """
    k, p = s.k, len(sequence)
    rows = [tuple(edge[sequence[(i + j) % p]] for j in range(p)) for i in range(k)]
    columns = [tuple(row[j] for row in rows) for j in range(p)]
    values = [table(row) for row in rows]
    image = tuple(values)
    return {
        "rows": rows,
        "columns_in_relation": all(c in s.relation for c in columns),
        "row_values_equal": len(set(values)) == 1,
        "image": image,
        "refutes": all(c in s.relation for c in columns) and len(set(values)) == 1 and image not in s.relation,
    }


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % q for q in range(2, int(n**0.5) + 1))


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    q = n + 1
    while not _is_prime(q):
        q += 1
    return q


@dataclass(frozen=True)
class Classification:
    verdict: str  # "Tractable" or "NPComplete"
    reason: str  # NoHyperedges | Bipartite | NonBipartiteGraph | SimNonBipartite | NoCyclicPolymorphism
    evidence: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "reason": self.reason, "evidence": self.evidence}

    def validate(self, s: KStructure) -> bool:
        """Re-check the evidence against ``s`` without trusting the classifier."""
        ev = self.evidence
        if self.reason == "NoHyperedges":
            return not s.relation
        if self.reason == "Bipartite":
            return s.k == 2 and odd_cycle(s) is None
        if self.reason in ("NonBipartiteGraph", "SimNonBipartite"):
            graph = s if self.reason == "NonBipartiteGraph" else derive_sim(s)
            return _is_odd_cycle(graph, ev["odd_cycle"])
        if self.reason != "NoCyclicPolymorphism":
            return False
        p = ev["p"]
        if ev["mode"] == "SequenceArgument":
            u, v = (s.index[x] for x in ev["edge"])
            return (
                frozenset((u, v)) in s.underlying_sets
                and len(ev["sequence"]) == p
                and max_cyclic_run(ev["sequence"]) < s.k
            )
        if ev["method"] == "tables":
            classes = tuple(necklace_classes(len(s), p))
            seen = set()
            for entry in ev["transcript"]:
                if entry["columns"] is None:
                    return False
                cols = [tuple(c) for c in entry["columns"]]
                table = CyclicOpTable(s, p, classes, tuple(entry["values"]))
                image = tuple(table([c[j] for c in cols]) for j in range(s.k))
                if any(c not in s.relation for c in cols) or image in s.relation or image != tuple(entry["image"]):
                    return False
                seen.add(tuple(entry["values"]))
            return len(seen) == len(s) ** len(classes)
        return cyclic_polymorphism(s, p) is None


def _is_odd_cycle(graph: KStructure, names: Sequence[str]) -> bool:
    n = len(names)
    if n < 3 or n % 2 == 0 or len(set(names)) != n:
        return False
    idx = [graph.index[x] for x in names]
    return all((idx[i], idx[(i + 1) % n]) in graph.relation for i in range(n))


def classify(s: KStructure, budget: Budget = DEFAULT_BUDGET, table_limit: int = TABLE_LIMIT) -> Classification:
    if not s.set_closed:
        raise NotSetClosed("classify needs a set-closed structure; closure would change the template")
    if not s.loop_free:
        raise HasLoop("classify needs a loop-free structure")
    if not s.relation:
        return Classification("Tractable", "NoHyperedges")
    if s.k == 2:
        cyc = odd_cycle(s)
        if cyc is None:
            return Classification("Tractable", "Bipartite")
        return Classification("NPComplete", "NonBipartiteGraph", {"odd_cycle": cyc})

    d = s.c_min
    if d > 2:
        cyc = odd_cycle(derive_sim(s))
        assert cyc is not None, "a union of d-cliques with d > 2 always has a triangle"
        return Classification("NPComplete", "SimNonBipartite", {"d": d, "odd_cycle": cyc})

    p = next_prime(len(s))
    edge = next(sorted(u) for u in sorted(s.underlying_sets, key=sorted) if len(u) == 2)
    n_classes = len(necklace_classes(len(s), p)) if len(s) ** p <= QUOTIENT_LIMIT else None
    if n_classes is not None and len(s) ** n_classes <= table_limit:
        found, transcript = exhaustive_table_search(s, p)
        if found:
            raise HornlabError("found a cyclic polymorphism for a hypergraph with a 2-edge at k > 2")
        return Classification(
            "NPComplete",
            "NoCyclicPolymorphism",
            {"p": p, "mode": "ExhaustiveSearch", "method": "tables", "classes": n_classes,
             "tables_checked": len(transcript), "transcript": transcript},
        )
    if n_classes is not None and len(s.relation) ** p <= QUOTIENT_LIMIT:
        try:
            table = cyclic_polymorphism(s, p, budget)
        except BudgetExhausted:
            table = None
            exhausted = True
        else:
            exhausted = False
            if table is not None:
                raise HornlabError("found a cyclic polymorphism for a hypergraph with a 2-edge at k > 2")
        if not exhausted:
            return Classification(
                "NPComplete",
                "NoCyclicPolymorphism",
                {"p": p, "mode": "ExhaustiveSearch", "method": "quotient", "classes": n_classes},
            )
    return Classification(
        "NPComplete",
        "NoCyclicPolymorphism",
        {"p": p, "mode": "SequenceArgument", "edge": s.named(edge), "sequence": list(nae_sequence(p, s.k)),
         "note": "symbolic certificate from the run-free sequence argument, not a search result"},
    )

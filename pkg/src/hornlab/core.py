"""Hypergraphs, k-hypergraph structures and their algebraic constructions.

Elements are named by strings on the outside and addressed by dense
indices ``0..n-1`` (their position in ``universe``/``vertices``) on the
inside.  Every value here is immutable.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import (
    ArityTooSmall,
    EmptyFamily,
    MixedArity,
    NotAHomomorphism,
    NotSetClosed,
    UnknownElement,
)

__all__ = [
    "Hypergraph",
    "KStructure",
    "Homomorphism",
    "DisjointUnion",
    "set_closure",
    "surjective_tuples",
    "to_kstructure",
    "to_hypergraph",
    "induced_substructure",
    "disjoint_union",
    "direct_product",
    "direct_power",
    "relabel",
    "is_homomorphism",
    "is_hypergraph_homomorphism",
]


def _names(items: Iterable) -> tuple[str, ...]:
    names = tuple(str(x) for x in items)
    if len(set(names)) != len(names):
        raise ValueError("element identifiers must be unique")
    return names


@dataclass(frozen=True)
class Hypergraph:
    """A vertex list plus a set of non-empty vertex subsets."""

    vertices: tuple[str, ...]
    edges: frozenset[frozenset[int]]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("vertex identifiers must be unique")
        n = len(self.vertices)
        for e in self.edges:
            if not e:
                raise ValueError("hyperedges must be non-empty")
            if min(e) < 0 or max(e) >= n:
                raise UnknownElement(f"edge {sorted(e)} mentions an unknown vertex index")

    @classmethod
    def from_edges(cls, vertices: Iterable, edges: Iterable[Iterable]) -> Hypergraph:
        vertices = _names(vertices)
        index = {v: i for i, v in enumerate(vertices)}
        out = set()
        for e in edges:
            try:
                out.add(frozenset(index[str(v)] for v in e))
            except KeyError as exc:
                raise UnknownElement(f"unknown vertex {exc.args[0]!r}") from None
        return cls(vertices, frozenset(out))

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def sorted_edges(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted(tuple(sorted(e)) for e in self.edges))

    @property
    def loop_free(self) -> bool:
        return all(len(e) >= 2 for e in self.edges)

    @property
    def max_edge_size(self) -> int:
        return max((len(e) for e in self.edges), default=0)

    def is_uniform(self, k: int) -> bool:
        return all(len(e) == k for e in self.edges)

    def edge_names(self) -> list[list[str]]:
        return [[self.vertices[i] for i in e] for e in self.sorted_edges]

    def __repr__(self):
        return f"Hypergraph(|V|={len(self.vertices)}, edges={self.edge_names()})"


@dataclass(frozen=True)
class KStructure:
    """A universe with a single k-ary relation, stored as index tuples."""

    k: int
    universe: tuple[str, ...]
    relation: frozenset[tuple[int, ...]]

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("arity must be at least 2")
        if len(set(self.universe)) != len(self.universe):
            raise ValueError("element identifiers must be unique")
        n = len(self.universe)
        for t in self.relation:
            if len(t) != self.k:
                raise MixedArity(f"tuple {t} does not have arity {self.k}")
            if t and (min(t) < 0 or max(t) >= n):
                raise UnknownElement(f"tuple {t} mentions an unknown element index")

    @classmethod
    def from_tuples(cls, k: int, universe: Iterable, tuples: Iterable[Sequence]) -> KStructure:
        universe = _names(universe)
        index = {v: i for i, v in enumerate(universe)}
        try:
            rel = frozenset(tuple(index[str(x)] for x in t) for t in tuples)
        except KeyError as exc:
            raise UnknownElement(f"unknown element {exc.args[0]!r}") from None
        return cls(k, universe, rel)

    def __len__(self) -> int:
        return len(self.universe)

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.universe)}

    @cached_property
    def tuples(self) -> tuple[tuple[int, ...], ...]:
        """The relation in canonical (lexicographic) order."""
        return tuple(sorted(self.relation))

    @cached_property
    def underlying_sets(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(t) for t in self.relation)

    @cached_property
    def set_closed(self) -> bool:
        counts = Counter(frozenset(t) for t in self.relation)
        return all(len(surjective_tuples(tuple(sorted(u)), self.k)) == c for u, c in counts.items())

    @cached_property
    def uniform(self) -> bool:
        return all(len(set(t)) == self.k for t in self.relation)

    @cached_property
    def loop_free(self) -> bool:
        return all(len(set(t)) > 1 for t in self.relation)

    @property
    def c_min(self) -> int | None:
        return min((len(u) for u in self.underlying_sets), default=None)

    @property
    def c_max(self) -> int | None:
        return max((len(u) for u in self.underlying_sets), default=None)

    def named(self, t: Sequence[int]) -> tuple[str, ...]:
        return tuple(self.universe[i] for i in t)

    def tuple_names(self) -> list[list[str]]:
        return [list(self.named(t)) for t in self.tuples]

    def __repr__(self):
        return f"KStructure(k={self.k}, |A|={len(self.universe)}, |r|={len(self.relation)})"


@lru_cache(maxsize=4096)
def surjective_tuples(elements: tuple[int, ...], k: int) -> tuple[tuple[int, ...], ...]:
    """All k-tuples whose underlying set is exactly ``set(elements)``."""
    target = frozenset(elements)
    if len(target) > k:
        return ()
    return tuple(t for t in itertools.product(sorted(target), repeat=k) if len(set(t)) == len(target))


def set_closure(s: KStructure) -> KStructure:
    rel = set()
    for u in s.underlying_sets:
        rel.update(surjective_tuples(tuple(sorted(u)), s.k))
    return KStructure(s.k, s.universe, frozenset(rel))


def to_kstructure(h: Hypergraph, k: int) -> KStructure:
    if h.max_edge_size > k:
        raise ArityTooSmall(f"arity {k} is below the largest hyperedge size {h.max_edge_size}")
    rel = set()
    for e in h.edges:
        rel.update(surjective_tuples(tuple(sorted(e)), k))
    return KStructure(k, h.vertices, frozenset(rel))


def to_hypergraph(s: KStructure) -> Hypergraph:
    if not s.set_closed:
        raise NotSetClosed("to_hypergraph needs a set-closed relation; apply set_closure first")
    return Hypergraph(s.universe, s.underlying_sets)


def induced_substructure(s: KStructure, subset: Iterable[str]) -> KStructure:
    """Model-theoretic substructure: keep the tuples lying entirely inside ``subset``.

    The universe keeps the order of ``s.universe``.
    """
    wanted = set()
    for x in subset:
        if x not in s.index:
            raise UnknownElement(f"unknown element {x!r}")
        wanted.add(s.index[x])
    keep = sorted(wanted)
    remap = {old: new for new, old in enumerate(keep)}
    rel = frozenset(tuple(remap[i] for i in t) for t in s.relation if all(i in remap for i in t))
    return KStructure(s.k, tuple(s.universe[i] for i in keep), rel)


class DisjointUnion(NamedTuple):
    structure: KStructure
    # origin[i] = (part number, index inside that part) for element i
    origin: tuple[tuple[int, int], ...]
    # offsets[p] = index of the first element of part p
    offsets: tuple[int, ...]

    def component_of(self, element: int) -> int:
        return self.origin[element][0]


def disjoint_union(parts: Sequence[KStructure], tags: Sequence[str] | None = None) -> DisjointUnion:
    """Tagged union; element ``x`` of part ``i`` is renamed ``f"{tag_i}.{x}"``."""
    if not parts:
        raise EmptyFamily("disjoint union of an empty list")
    k = parts[0].k
    if any(p.k != k for p in parts):
        raise MixedArity("all parts must share the same arity")
    if tags is None:
        tags = [str(i) for i in range(len(parts))]
    names: list[str] = []
    origin: list[tuple[int, int]] = []
    offsets: list[int] = []
    rel = set()
    for pi, (part, tag) in enumerate(zip(parts, tags)):
        off = len(names)
        offsets.append(off)
        names.extend(f"{tag}.{x}" for x in part.universe)
        origin.extend((pi, j) for j in range(len(part)))
        rel.update(tuple(off + i for i in t) for t in part.relation)
    return DisjointUnion(KStructure(k, tuple(names), frozenset(rel)), tuple(origin), tuple(offsets))


def direct_product(parts: Sequence[KStructure]) -> KStructure:
    """Cartesian product with the coordinatewise relation.

    Element names are ``"(a,b,...)"``; element order is lexicographic in the
    factors' orders.
    """
    if not parts:
        raise EmptyFamily("direct product over an empty family")
    k = parts[0].k
    if any(p.k != k for p in parts):
        raise MixedArity("all factors must share the same arity")
    sizes = [len(p) for p in parts]
    universe = tuple(
        "(" + ",".join(p.universe[i] for p, i in zip(parts, combo)) + ")"
        for combo in itertools.product(*(range(n) for n in sizes))
    )
    # mixed-radix weights, first factor most significant
    weights = [1] * len(parts)
    for i in range(len(parts) - 2, -1, -1):
        weights[i] = weights[i + 1] * sizes[i + 1]
    rel = set()
    for choice in itertools.product(*(p.tuples for p in parts)):
        rel.add(tuple(sum(w * t[j] for w, t in zip(weights, choice)) for j in range(k)))
    return KStructure(k, universe, frozenset(rel))


def direct_power(s: KStructure, n: int) -> KStructure:
    if n < 1:
        raise EmptyFamily("direct power needs at least one factor")
    return direct_product([s] * n)


def relabel(s: KStructure, names: Mapping[str, str] | Sequence[str], order: Sequence[int] | None = None) -> KStructure:
    """Isomorphic copy with renamed (and optionally reordered) elements.

    ``order`` lists old indices in their new positions.
    """
    if isinstance(names, Mapping):
        new_names = [names[x] for x in s.universe]
    else:
        new_names = list(names)
    if order is None:
        order = list(range(len(s)))
    pos = {old: new for new, old in enumerate(order)}
    universe = tuple(new_names[old] for old in order)
    rel = frozenset(tuple(pos[i] for i in t) for t in s.relation)
    return KStructure(s.k, universe, rel)


def is_homomorphism(source: KStructure, target: KStructure, mapping: Sequence[int]) -> bool:
    if source.k != target.k or len(mapping) != len(source):
        return False
    if any(not 0 <= v < len(target) for v in mapping):
        return False
    rel = target.relation
    return all(tuple(mapping[i] for i in t) in rel for t in source.relation)


def is_hypergraph_homomorphism(g: Hypergraph, h: Hypergraph, mapping: Sequence[int]) -> bool:
    """Edge-set version: every image set ``f(e)`` must itself be an edge."""
    if len(mapping) != len(g.vertices):
        return False
    return all(frozenset(mapping[v] for v in e) in h.edges for e in g.edges)


@dataclass(frozen=True)
class Homomorphism:
    """A total map ``source -> target``, validated on construction."""

    source: KStructure
    target: KStructure
    mapping: tuple[int, ...]

    def __post_init__(self):
        if not is_homomorphism(self.source, self.target, self.mapping):
            raise NotAHomomorphism("map does not send every relation tuple to a relation tuple")

    @classmethod
    def from_dict(cls, source: KStructure, target: KStructure, mapping: Mapping[str, str]) -> Homomorphism:
        try:
            return cls(source, target, tuple(target.index[mapping[x]] for x in source.universe))
        except KeyError as exc:
            raise UnknownElement(f"unknown or unmapped element {exc.args[0]!r}") from None

    @classmethod
    def identity(cls, s: KStructure) -> Homomorphism:
        return cls(s, s, tuple(range(len(s))))

    def __call__(self, x: str) -> str:
        return self.target.universe[self.mapping[self.source.index[x]]]

    def then(self, other: Homomorphism) -> Homomorphism:
        """Composite ``other o self``."""
        return Homomorphism(self.source, other.target, tuple(other.mapping[v] for v in self.mapping))

    def as_dict(self) -> dict[str, str]:
        return {x: self.target.universe[v] for x, v in zip(self.source.universe, self.mapping)}

    @property
    def injective(self) -> bool:
        return len(set(self.mapping)) == len(self.mapping)

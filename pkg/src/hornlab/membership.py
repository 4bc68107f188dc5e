"""Membership in SP(templates) via the three separation conditions.

A finite structure S lies in the universal Horn class of finitely many
finite templates exactly when

* SEP1: some template receives a homomorphism from S;
* SEP2: every pair x != y is split by some homomorphism into a template;
* SEP3: every k-tuple outside the relation of S is sent by some
  homomorphism to a tuple outside the template relation.

Equivalently S embeds into the power ``M^hom(S,M)`` via the evaluation
map (single template), which ``power_embedding`` builds independently.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .core import Homomorphism, Hypergraph, KStructure, direct_power, to_kstructure
from .errors import EmptyFamily, HomSetTruncated, MixedArity, NotMember, TooLarge
from .hom import DEFAULT_BUDGET, Budget, HomSet, hom_enumerate, hom_exists

__all__ = [
    "Witness",
    "MembershipCertificate",
    "member",
    "PowerEmbedding",
    "power_embedding",
    "NaeReport",
    "nae_membership_suite",
]

HOM_SET_CAP = 10**4


@dataclass(frozen=True)
class Witness:
    template: int
    hom: Homomorphism

    def to_json(self) -> dict:
        return {"template": self.template, "map": self.hom.as_dict()}


@dataclass
class MembershipCertificate:
    source: KStructure
    templates: tuple[KStructure, ...]
    member: bool
    # "sets" when non-edges are grouped by underlying set, "tuples" otherwise
    mode: str = "sets"
    phi: Witness | None = None
    separations: dict[tuple[str, str], Witness] = field(default_factory=dict)
    non_edges: dict[tuple[str, ...], Witness] = field(default_factory=dict)
    failed: str | None = None
    witness: tuple[str, ...] | None = None

    def __bool__(self):
        return self.member

    def validate(self) -> bool:
        """Re-check every stored claim from scratch."""
        s = self.source

        def ok_hom(w: Witness) -> bool:
            return 0 <= w.template < len(self.templates) and w.hom.source == s and w.hom.target == self.templates[w.template]

        if not self.member:
            return self.failed in ("SEP1", "SEP2", "SEP3")
        if self.phi is None or not ok_hom(self.phi):
            return False
        pairs = set(itertools.combinations(s.universe, 2))
        if set(self.separations) != pairs:
            return False
        for (x, y), w in self.separations.items():
            if not ok_hom(w) or w.hom(x) == w.hom(y):
                return False
        if set(self.non_edges) != set(_non_edge_keys(s, self.mode)):
            return False
        for key, w in self.non_edges.items():
            m = self.templates[w.template]
            if not ok_hom(w) or _image_is_edge(w.hom, m, key, self.mode):
                return False
        return True

    def to_json(self) -> dict:
        out: dict = {"member": self.member, "mode": self.mode}
        if self.member:
            out["sep1"] = self.phi.to_json()
            out["sep2"] = [{"pair": list(p), **w.to_json()} for p, w in self.separations.items()]
            out["sep3"] = [{"non_edge": list(key), **w.to_json()} for key, w in self.non_edges.items()]
        else:
            out["failed"] = self.failed
            out["witness"] = None if self.witness is None else list(self.witness)
        return out


def _image_is_edge(hom: Homomorphism, m: KStructure, key: tuple[str, ...], mode: str) -> bool:
    if mode == "sets":
        return frozenset(hom.mapping[hom.source.index[x]] for x in key) in m.underlying_sets
    return tuple(hom.mapping[hom.source.index[x]] for x in key) in m.relation


def _non_edge_keys(s: KStructure, mode: str) -> list[tuple[str, ...]]:
    n, k = len(s), s.k
    if mode == "sets":
        return [
            s.named(c)
            for size in range(1, min(k, n) + 1)
            for c in itertools.combinations(range(n), size)
            if frozenset(c) not in s.underlying_sets
        ]
    return [s.named(t) for t in itertools.product(range(n), repeat=k) if t not in s.relation]


def _pinned_search(s, m, key_idx, wanted, budget, mode) -> Homomorphism | None:
    """Per-query fallback: try every assignment of the key's elements that has the wanted effect."""
    distinct = sorted(set(key_idx))
    for values in itertools.product(range(len(m)), repeat=len(distinct)):
        assign = dict(zip(distinct, values))
        if not wanted(assign):
            continue
        pins = {s.universe[a]: m.universe[b] for a, b in assign.items()}
        h = hom_exists(s, m, budget, pinned=pins)
        if h is not None:
            return h
    return None


def member(
    s: KStructure,
    templates: Sequence[KStructure],
    budget: Budget = DEFAULT_BUDGET,
    hom_cap: int = HOM_SET_CAP,
) -> MembershipCertificate:
    if not templates:
        raise EmptyFamily("need at least one template")
    if any(m.k != s.k for m in templates):
        raise MixedArity("templates and structure must share the arity")
    templates = tuple(templates)
    homsets: list[HomSet] = [hom_enumerate(s, m, cap=hom_cap, budget=budget) for m in templates]
    mode = "sets" if s.set_closed and all(m.set_closed for m in templates) else "tuples"
    cert = MembershipCertificate(s, templates, member=False, mode=mode)

    # SEP1
    for ti, hs in enumerate(homsets):
        if hs.homs:
            cert.phi = Witness(ti, hs.homs[0])
            break
    else:
        cert.failed = "SEP1"
        return cert

    def find(test, pinned_query) -> Witness | None:
        for ti, hs in enumerate(homsets):
            for h in hs.homs:
                if test(h.mapping, templates[ti]):
                    return Witness(ti, h)
        for ti, hs in enumerate(homsets):
            if not hs.complete:
                h = pinned_query(templates[ti])
                if h is not None:
                    return Witness(ti, h)
        return None

    # SEP2
    for x, y in itertools.combinations(range(len(s)), 2):
        w = find(
            lambda f, m: f[x] != f[y],
            lambda m: _pinned_search(s, m, (x, y), lambda a: a[x] != a[y], budget, mode),
        )
        if w is None:
            cert.failed, cert.witness = "SEP2", (s.universe[x], s.universe[y])
            return cert
        cert.separations[(s.universe[x], s.universe[y])] = w

    # SEP3
    phi_template = templates[cert.phi.template]
    for key in _non_edge_keys(s, mode):
        idx = tuple(s.index[x] for x in key)
        if mode == "sets" and len(idx) == 1 and phi_template.loop_free:
            # a singleton image is never an edge of a loop-free template
            cert.non_edges[key] = cert.phi
            continue
        if mode == "sets":
            cells = frozenset(idx)

            def test(f, m, cells=cells):
                return frozenset(f[i] for i in cells) not in m.underlying_sets

            def wanted_for(m, cells=cells):
                return lambda a: frozenset(a[i] for i in cells) not in m.underlying_sets
        else:

            def test(f, m, idx=idx):
                return tuple(f[i] for i in idx) not in m.relation

            def wanted_for(m, idx=idx):
                return lambda a: tuple(a[i] for i in idx) not in m.relation

        w = find(test, lambda m: _pinned_search(s, m, idx, wanted_for(m), budget, mode))
        if w is None:
            cert.failed, cert.witness = "SEP3", key
            return cert
        cert.non_edges[key] = w

    cert.member = True
    return cert


@dataclass(frozen=True)
class PowerEmbedding:
    """The evaluation map ``x -> (h(x))_h`` of S into ``M^hom(S,M)``."""

    source: KStructure
    template: KStructure
    homs: tuple[Homomorphism, ...]

    def image(self, x: int) -> tuple[int, ...]:
        return tuple(h.mapping[x] for h in self.homs)

    def image_names(self) -> dict[str, str]:
        m = self.template
        return {
            x: "(" + ",".join(m.universe[v] for v in self.image(i)) + ")" for i, x in enumerate(self.source.universe)
        }

    def is_injective(self) -> bool:
        images = [self.image(i) for i in range(len(self.source))]
        return len(set(images)) == len(images)

    def reflects_relation(self) -> bool:
        """A k-tuple is in S exactly when every coordinate hom sends it into M."""
        s, m = self.source, self.template
        for t in itertools.product(range(len(s)), repeat=s.k):
            in_power = all(tuple(h.mapping[i] for i in t) in m.relation for h in self.homs)
            if in_power != (t in s.relation):
                return False
        return True

    def is_embedding(self) -> bool:
        return self.is_injective() and self.reflects_relation()

    def homomorphism(self, max_power_size: int = 10**5) -> Homomorphism:
        """The map as a Homomorphism into the materialized direct power."""
        size = len(self.template) ** len(self.homs)
        if size > max_power_size:
            raise TooLarge(f"direct power has {size} elements")
        power = direct_power(self.template, len(self.homs))
        return Homomorphism.from_dict(self.source, power, self.image_names())


def power_embedding(s: KStructure, m: KStructure, cap: int = HOM_SET_CAP, budget: Budget = DEFAULT_BUDGET) -> PowerEmbedding:
    hs = hom_enumerate(s, m, cap=cap, budget=budget)
    if not hs.complete:
        raise HomSetTruncated(f"more than {cap} homomorphisms")
    emb = PowerEmbedding(s, m, hs.homs)
    if not emb.is_embedding():
        raise NotMember("the evaluation map into the hom-indexed power is not an embedding")
    return emb


@dataclass
class NaeReport:
    k: int
    edge_size: int
    certificate: MembershipCertificate
    # witnesses built the way the hand proof builds them: surjections
    constructed_sep1: Homomorphism
    constructed_sep2: dict[tuple[str, str], Homomorphism]
    constructed_sep3: dict[tuple[str, ...], Homomorphism]
    constructed_valid: bool

    @property
    def member(self) -> bool:
        return self.certificate.member and self.constructed_valid

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "edge_size": self.edge_size,
            "member": self.member,
            "search_certificate_valid": self.certificate.validate(),
            "constructed_valid": self.constructed_valid,
            "sep1": self.constructed_sep1.as_dict(),
            "sep2_count": len(self.constructed_sep2),
            "sep3_count": len(self.constructed_sep3),
        }


def _single_edge(size: int) -> Hypergraph:
    return Hypergraph(tuple(str(i) for i in range(size)), frozenset([frozenset(range(size))]))


def nae_membership_suite(k: int, edge_size: int, budget: Budget = DEFAULT_BUDGET) -> NaeReport:
    """Check that the k-uniform single edge lies in SP of a smaller single edge read at arity k."""
    if not k > edge_size > 1:
        raise ValueError("need k > edge_size > 1")
    small = to_kstructure(_single_edge(edge_size), k)
    big = to_kstructure(_single_edge(k), k)
    cert = member(big, [small], budget)

    def surjection(values: Sequence[int]) -> Homomorphism:
        return Homomorphism(big, small, tuple(values))

    valid = True
    base = [min(i, edge_size - 1) for i in range(k)]
    sep1 = surjection(base)
    sep2 = {}
    for x, y in itertools.combinations(range(k), 2):
        # x -> 0, y -> 1, everything else covers the remaining points
        rest = [i for i in range(k) if i not in (x, y)]
        values = [0] * k
        values[x], values[y] = 0, 1
        for j, i in enumerate(rest):
            values[i] = min(j + 2, edge_size - 1) if edge_size > 2 else j % 2
        h = surjection(values)
        valid &= h.mapping[x] != h.mapping[y]
        sep2[(big.universe[x], big.universe[y])] = h
    sep3 = {}
    for size in range(1, k):
        for cells in itertools.combinations(range(k), size):
            if size < edge_size:
                h = sep1
            else:
                # cells onto {0..edge_size-2}, the other k-size points onto the last vertex
                values = [edge_size - 1] * k
                for j, i in enumerate(cells):
                    values[i] = min(j, edge_size - 2)
                h = surjection(values)
            valid &= frozenset(h.mapping[i] for i in cells) not in small.underlying_sets
            sep3[big.named(cells)] = h
    return NaeReport(k, edge_size, cert, sep1, sep2, sep3, valid and cert.validate())

import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hornlab.core import Hypergraph, KStructure, disjoint_union, induced_substructure, to_kstructure
from hornlab.errors import EmptyFamily, HomSetTruncated, MixedArity, NotMember
from hornlab.generators import edgeless, random_hyperforest, single_edge
from hornlab.hom import hom_enumerate
from hornlab.membership import member, nae_membership_suite, power_embedding

from .oracles import brute_embeds_into_power, brute_member, random_set_closed, random_structure
from .test_core import kstructures


def test_examples(K2, K3, P3):
    c = member(K3, [K2])
    assert not c.member and c.failed == "SEP1" and c.validate()
    c = member(P3, [K2])
    assert not c.member and c.failed == "SEP2" and c.witness == ("0", "2")
    two = disjoint_union([K2, K2]).structure
    c = member(two, [K2])
    assert c.member and c.validate()
    assert set(c.separations) == set(itertools.combinations(two.universe, 2))
    assert c.to_json()["member"] is True


def test_errors(K2, E3):
    with pytest.raises(EmptyFamily):
        member(K2, [])
    with pytest.raises(MixedArity):
        member(K2, [E3])


def test_hyperforests_in_single_edge_class(E3):
    for seed in range(10):
        h = random_hyperforest(3, 5, seed=seed, max_vertices=12)
        c = member(to_kstructure(h, 3), [E3])
        assert c.member and c.validate()


@given(kstructures(max_n=4, ks=(2,)), kstructures(max_n=3, ks=(2,)))
@settings(max_examples=120, deadline=None)
def test_member_matches_definition_graphs(s, m):
    c = member(s, [m])
    assert c.member == brute_member(s, [m])
    assert c.validate()


def test_member_matches_definition_arity3():
    rng = random.Random(21)
    for _ in range(80):
        s = random_structure(rng, rng.randint(1, 4), 3, density=0.08)
        ms = [random_structure(rng, rng.randint(1, 3), 3, density=0.3) for _ in range(rng.randint(1, 2))]
        c = member(s, ms)
        assert c.member == brute_member(s, ms)
        assert c.validate()


def test_set_mode_matches_definition():
    rng = random.Random(8)
    seen = 0
    for _ in range(80):
        s = random_set_closed(rng, rng.randint(1, 5), 3, p_edge=0.25)
        m = random_set_closed(rng, rng.randint(2, 3), 3, p_edge=0.5)
        c = member(s, [m])
        assert c.mode == "sets"
        assert c.member == brute_member(s, [m])
        assert c.validate()
        seen += c.member
    assert seen > 0


def test_truncated_hom_sets_fall_back_to_pinned_search(E3):
    h = to_kstructure(random_hyperforest(3, 4, seed=2), 3)
    full = member(h, [E3])
    capped = member(h, [E3], hom_cap=1)
    assert full.member == capped.member
    assert capped.validate()


def test_monotone_under_substructures():
    rng = random.Random(4)
    for _ in range(30):
        m = random_set_closed(rng, 3, 2, p_edge=0.6)
        s = random_set_closed(rng, rng.randint(2, 5), 2, p_edge=0.4)
        if not member(s, [m]).member:
            continue
        for size in range(1, len(s)):
            for sub in itertools.combinations(s.universe, size):
                assert member(induced_substructure(s, sub), [m]).member


# ---------------------------------------------------------------- power embedding


def test_power_embedding_examples(K2):
    two = disjoint_union([K2, K2]).structure
    emb = power_embedding(two, K2)
    assert len(emb.homs) == 4 and emb.is_embedding()
    h = emb.homomorphism()
    assert h.injective
    e = power_embedding(K2, K2)
    assert e.image_names() == {"0": "(0,1)", "1": "(1,0)"}
    g2 = to_kstructure(edgeless(2), 2)
    g1 = to_kstructure(edgeless(1), 2)
    with pytest.raises(NotMember):
        power_embedding(g2, g1)
    assert power_embedding(g2, g2).is_embedding()
    with pytest.raises(HomSetTruncated):
        power_embedding(two, K2, cap=2)


def test_power_embedding_agrees_with_membership():
    rng = random.Random(9)
    members = non_members = 0
    for _ in range(120):
        m = random_set_closed(rng, rng.randint(2, 3), 2, p_edge=0.6)
        s = random_set_closed(rng, rng.randint(1, 5), 2, p_edge=0.4)
        verdict = member(s, [m]).member
        homs = hom_enumerate(s, m, cap=64)
        if verdict and homs.complete:
            assert power_embedding(s, m).is_embedding()
            members += 1
        elif not verdict:
            with pytest.raises(NotMember):
                power_embedding(s, m, cap=10**4)
            if len(s) <= 5:
                assert not any(brute_embeds_into_power(s, m, j) for j in (1, 2, 3) if len(m) ** j <= 9)
            non_members += 1
    assert members and non_members


# ---------------------------------------------------------------- single-edge templates


@pytest.mark.parametrize("k, ell", [(3, 2), (4, 2), (4, 3), (5, 2), (5, 3), (5, 4)])
def test_nae_suite(k, ell):
    rep = nae_membership_suite(k, ell)
    assert rep.member and rep.constructed_valid and rep.certificate.validate()


def test_nae_suite_preconditions():
    with pytest.raises(ValueError):
        nae_membership_suite(3, 3)


def _chain(k: int, edges: int, detached_last: bool) -> Hypergraph:
    out, n = [], 0
    for i in range(edges):
        if i == 0 or (detached_last and i == edges - 1):
            out.append(frozenset(range(n, n + k)))
            n += k
        else:
            out.append(frozenset([n - 1, *range(n, n + k - 1)]))
            n += k - 1
    return Hypergraph(tuple(str(i) for i in range(n)), frozenset(out))


@pytest.mark.parametrize("k", [2, 3, 4])
@pytest.mark.parametrize("detached", [False, True])
def test_leaf_extension_counts(k, detached):
    # a homomorphism into the single k-edge, fixed off the last leaf, extends
    # in k! ways when the leaf is its own component and (k-1)! ways otherwise
    h = _chain(k, 3, detached)
    s = to_kstructure(h, k)
    ek = to_kstructure(single_edge(k), k)
    leaf = max(h.edges, key=max)
    rest = [v for v in range(len(h.vertices)) if v not in leaf or any(v in e for e in h.edges - {leaf})]
    base = induced_substructure(s, [h.vertices[v] for v in rest])
    for phi in hom_enumerate(base, ek, cap=5):
        pins = phi.as_dict()
        count = len(hom_enumerate(s, ek, pinned=pins))
        assert count == (math.factorial(k) if detached else math.factorial(k - 1))


def test_certificate_json_shapes(K2, P3):
    bad = member(P3, [K2]).to_json()
    assert bad == {"member": False, "mode": "sets", "failed": "SEP2", "witness": ["0", "2"]}
    good = member(disjoint_union([K2, K2]).structure, [K2]).to_json()
    assert {"sep1", "sep2", "sep3"} <= set(good)

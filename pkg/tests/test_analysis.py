import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hornlab.analysis import (
    INF,
    CycleWitness,
    chromatic_number,
    colouring,
    connected_components,
    distance,
    distances_from,
    find_leaf,
    girth,
    is_bipartite,
    is_hyperforest,
    n_ball,
    odd_cycle,
    shadow_graph,
    shortest_cycle,
)
from hornlab.core import Hypergraph, KStructure, to_kstructure
from hornlab.errors import CapExceeded, HasLoop, UnknownElement
from hornlab.generators import complete_hypergraph, cycle_graph, edgeless, random_hyperforest, single_edge
from hornlab.hom import colourable

from .oracles import bfs_components, brute_chromatic, brute_colourable, brute_girth, random_set_closed, shadow_distances


def hg(edges, n=None):
    n = n if n is not None else max((max(e) for e in edges), default=-1) + 1
    return Hypergraph(tuple(str(i) for i in range(n)), frozenset(frozenset(e) for e in edges))


@st.composite
def small_hypergraphs(draw, max_n=7, max_edges=5, loops=False):
    n = draw(st.integers(1, max_n))
    lo = 1 if loops else 2
    subsets = [frozenset(c) for size in range(lo, min(4, n) + 1) for c in itertools.combinations(range(n), size)]
    if not subsets:
        return hg([], n)
    edges = draw(st.sets(st.sampled_from(subsets), max_size=max_edges))
    return hg(edges, n)


# ---------------------------------------------------------------- girth and cycles


def test_girth_examples(fano):
    assert girth(single_edge(4)) == INF
    assert girth(hg([(0, 1, 2), (1, 2, 3)])) == 2
    assert girth(fano) == 3
    assert girth(fano, min_length=1) == 1
    with pytest.raises(ValueError):
        girth(fano, min_length=3)


def test_hyperforest_examples(fano):
    assert is_hyperforest(single_edge(3))
    assert not is_hyperforest(fano)
    assert is_hyperforest(hg([(0, 1, 2), (2, 3, 4), (4, 5, 6)]))


@given(small_hypergraphs())
@settings(max_examples=150, deadline=None)
def test_girth_matches_brute_force(h):
    g = girth(h)
    assert g == brute_girth(h)
    c = shortest_cycle(h)
    if g == INF:
        assert c is None
    else:
        assert c.is_valid(h) and len(c) == g


def test_girth_seeded_corpus():
    rng = random.Random(11)
    for _ in range(300):
        n = rng.randint(2, 7)
        subsets = [c for size in (2, 3) for c in itertools.combinations(range(n), size)]
        h = hg(rng.sample(subsets, min(len(subsets), rng.randint(0, 5))), n)
        assert girth(h) == brute_girth(h)


def test_cycle_witness_rejects_bad_sequences():
    h = hg([(0, 1), (1, 2), (0, 2)])
    e01, e12, e02 = frozenset({0, 1}), frozenset({1, 2}), frozenset({0, 2})
    assert CycleWitness((1, 2, 0), (e01, e12, e02)).is_valid(h)
    assert not CycleWitness((1, 1, 0), (e01, e12, e02)).is_valid(h)
    assert not CycleWitness((0,), (e01,)).is_valid(h)


# ---------------------------------------------------------------- leaves


def test_leaf_examples(fano):
    chain = hg([(0, 1, 2), (2, 3, 4)])
    assert find_leaf(chain) in chain.edges
    assert find_leaf(fano) is None
    assert find_leaf(edgeless(3)) is None


@given(st.integers(2, 4), st.integers(1, 8), st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_hyperforest_leaf_induction(k, m, seed):
    h = random_hyperforest(k, m, seed=seed)
    while h.edges:
        assert is_hyperforest(h)
        leaf = find_leaf(h)
        assert leaf is not None
        others = h.edges - {leaf}
        shared = {v for v in leaf if any(v in e for e in others)}
        assert len(shared) <= 1
        h = Hypergraph(h.vertices, frozenset(others))


# ---------------------------------------------------------------- colouring


def test_chromatic_examples(fano, E3):
    for n in range(1, 6):
        for k in range(2, 5):
            assert chromatic_number(complete_hypergraph(n, k)) == n
    assert chromatic_number(fano) == 3
    assert not brute_colourable(fano, 2)
    assert chromatic_number(single_edge(3)) == 2
    with pytest.raises(HasLoop):
        chromatic_number(hg([(0,), (0, 1)]))
    with pytest.raises(CapExceeded):
        chromatic_number(complete_hypergraph(4, 2), cap=3)


@given(small_hypergraphs(max_n=6, max_edges=6))
@settings(max_examples=80, deadline=None)
def test_chromatic_number_equals_least_hom_into_complete(h):
    chi = chromatic_number(h)
    assert chi == brute_chromatic(h)
    k = max(2, h.max_edge_size)
    s = to_kstructure(h, k)
    assert colourable(s, chi) is not None
    if chi > 1:
        assert colourable(s, chi - 1) is None
    col = colouring(h, chi)
    assert all(len({col[v] for v in e}) >= 2 for e in h.edges)


# ---------------------------------------------------------------- distances and balls


def test_distance_examples(C21):
    assert distance(C21, "0", "1") == 1
    assert distance(C21, "0", "10") == 10
    two = to_kstructure(hg([(0, 1)], 3), 2)
    assert distance(two, "0", "2") == INF
    assert distance(two, "1", "1") == 0
    with pytest.raises(UnknownElement):
        distance(two, "0", "7")


def test_ball_examples(C21, G1):
    b = n_ball(C21, "0", 9)
    assert len(b.structure) == 19
    assert is_hyperforest(Hypergraph(b.structure.universe, b.structure.underlying_sets))
    assert b.boundary == {"9", "12"}
    lonely = n_ball(G1, "0", 3)
    assert len(lonely.structure) == 1 and lonely.boundary == frozenset()
    zero = n_ball(C21, "5", 0)
    assert zero.structure.universe == ("5",) and zero.boundary == {"5"}


def test_distances_match_floyd_warshall():
    rng = random.Random(5)
    for _ in range(40):
        s = random_set_closed(rng, rng.randint(1, 9), 3, p_edge=0.08)
        d = shadow_distances(s)
        for a in s.universe:
            got = distances_from(s, a)
            assert [got[x] for x in s.universe] == d[s.index[a]]


def test_observation_ball_distances_agree():
    # inside B_n(a), points at depths j, j' whose distance is at most 2n-j-j'
    # have the same distance in the ball as in the whole structure
    rng = random.Random(32)
    checked = 0
    for _ in range(60):
        size = rng.randint(5, 30)
        s = random_set_closed(rng, size, 3, p_edge=3.0 / size**2)
        full = shadow_distances(s)
        for a in rng.sample(range(size), 3):
            for n in (1, 2, 3):
                ball = n_ball(s, s.universe[a], n).structure
                inner = shadow_distances(ball)
                for b, c in itertools.combinations(range(len(ball)), 2):
                    gb, gc = s.index[ball.universe[b]], s.index[ball.universe[c]]
                    j, jj = full[a][gb], full[a][gc]
                    if full[gb][gc] <= 2 * n - j - jj:
                        assert inner[b][c] == full[gb][gc]
                        checked += 1
    assert checked > 100


def test_shadow_graph_and_components():
    s = to_kstructure(hg([(0, 1, 2), (3, 4)], 6), 3)
    adj = shadow_graph(s)
    assert adj[0] == {1, 2} and adj[5] == frozenset()
    comps = connected_components(s)
    assert sorted(map(sorted, comps)) == sorted(map(sorted, bfs_components(6, [(0, 1, 2), (3, 4)])))


# ---------------------------------------------------------------- bipartite


def test_bipartite_examples(K2, K3):
    assert is_bipartite(K2)
    cyc = odd_cycle(K3)
    assert len(cyc) == 3
    assert is_bipartite(to_kstructure(cycle_graph(6), 2))


@given(st.integers(3, 12), st.integers(0, 10**6))
@settings(max_examples=40)
def test_odd_cycle_is_a_real_odd_cycle(n, seed):
    rng = random.Random(seed)
    s = random_set_closed(rng, n, 2, p_edge=0.3)
    cyc = odd_cycle(s)
    if cyc is None:
        assert brute_colourable(Hypergraph(s.universe, s.underlying_sets), 2)
    else:
        idx = [s.index[x] for x in cyc]
        assert len(idx) % 2 == 1 and len(set(idx)) == len(idx)
        assert all((idx[i], idx[(i + 1) % len(idx)]) in s.relation for i in range(len(idx)))


def test_bipartite_needs_graph(E3):
    with pytest.raises(ValueError):
        is_bipartite(E3)
    loop = KStructure.from_tuples(2, ["a"], [["a", "a"]])
    with pytest.raises(HasLoop):
        is_bipartite(loop)

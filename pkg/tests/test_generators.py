import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hornlab import khs
from hornlab.analysis import chromatic_number, girth, is_hyperforest
from hornlab.core import to_kstructure
from hornlab.errors import BudgetExhausted, PreconditionFailed
from hornlab.generators import (
    SearchBudget,
    complete_hypergraph,
    cycle_graph,
    density_checks,
    density_witness,
    edgeless,
    fano_plane,
    high_chromatic_sparse,
    nfa_witness,
    path_graph,
    random_hyperforest,
    single_edge,
    sparse_incomparability,
)
from hornlab.hom import hom_exists

from .oracles import brute_chromatic, brute_colourable


def test_standard_shapes():
    assert single_edge(3).edges == {frozenset({0, 1, 2})}
    assert len(edgeless(1).vertices) == 1 and not edgeless(2).edges
    assert len(cycle_graph(5).edges) == 5 and len(path_graph(3).edges) == 2
    assert len(fano_plane().edges) == 7


@given(st.integers(2, 5), st.integers(0, 10), st.integers(0, 10**6))
@settings(max_examples=80, deadline=None)
def test_random_hyperforest_invariants(k, edges, seed):
    h = random_hyperforest(k, edges, seed=seed)
    assert len(h.edges) == edges and h.is_uniform(k) if edges else True
    assert is_hyperforest(h)
    assert khs.dumps(h) == khs.dumps(random_hyperforest(k, edges, seed=seed))


def test_random_hyperforest_single_edge_and_cap():
    assert random_hyperforest(3, 1, seed=4).edges == single_edge(3).edges
    for seed in range(30):
        h = random_hyperforest(3, 5, seed=seed, max_vertices=12)
        assert len(h.vertices) <= 12 and is_hyperforest(h)


def _linear(h):
    return all(len(a & b) <= 1 for a, b in itertools.combinations(h.edges, 2))


def test_high_chromatic_examples():
    h = high_chromatic_sparse(3, 2, 2)
    assert h.is_uniform(3) and girth(h) > 2 and _linear(h)
    assert not brute_colourable(h, 2) if len(h.vertices) <= 16 else chromatic_number(h) > 2
    fixture = high_chromatic_sparse(3, 2, 2, use_fixture=True)
    assert fixture == fano_plane()
    h = high_chromatic_sparse(3, 2, 1)
    assert girth(h) > 2 and chromatic_number(h) > 1
    c = high_chromatic_sparse(2, 3, 2)
    assert girth(c) > 3 and brute_chromatic(c) == 3


def test_budget_zero_exhausts():
    with pytest.raises(BudgetExhausted):
        high_chromatic_sparse(3, 2, 2, SearchBudget(max_candidates=0))


def test_seed_determinism():
    a = high_chromatic_sparse(3, 2, 2, SearchBudget(seed=3))
    b = high_chromatic_sparse(3, 2, 2, SearchBudget(seed=3))
    assert khs.dumps(a) == khs.dumps(b)


def test_sparse_incomparability_examples(K2, K3):
    s = sparse_incomparability(K2, K3, 3)
    h = s.underlying_sets
    from hornlab.core import Hypergraph

    assert girth(Hypergraph(s.universe, h)) > 3
    assert hom_exists(s, K3) is not None and hom_exists(s, K2) is None
    with pytest.raises(BudgetExhausted):
        sparse_incomparability(K2, K3, 3, SearchBudget(max_candidates=0))
    with pytest.raises(PreconditionFailed):
        sparse_incomparability(K3, K2, 3)


@pytest.mark.slow
def test_sparse_incomparability_hypergraphs():
    k23 = to_kstructure(complete_hypergraph(2, 2), 3)
    k33 = to_kstructure(complete_hypergraph(3, 3), 3)
    s = sparse_incomparability(k23, k33, 2)
    assert hom_exists(s, k33) is not None and hom_exists(s, k23) is None
    # the Fano plane passes the same three checks
    f = to_kstructure(fano_plane(), 3)
    assert girth(fano_plane()) > 2 and hom_exists(f, k33) and hom_exists(f, k23) is None


def test_density_examples(K2, K3):
    h = density_witness(K2, K3)
    assert all(density_checks(K2, K3, h).values())
    sparse = [x for x in h.universe if x.startswith("sparse.")]
    from hornlab.core import induced_substructure

    assert hom_exists(induced_substructure(h, sparse), K2) is None
    with pytest.raises(PreconditionFailed):
        density_witness(K2, K2)
    with pytest.raises(PreconditionFailed):
        density_witness(to_kstructure(edgeless(1), 2), K3)


def test_nfa_example(E3):
    rep = nfa_witness(E3, 2)
    assert rep.ok and rep.exhaustive
    assert rep.subsets_checked == len(list(itertools.combinations(rep.witness.vertices, 2)))
    assert rep.witness_girth > 2 and rep.template_chromatic == 2


def test_nfa_preconditions():
    loop = to_kstructure(edgeless(2), 3)
    with pytest.raises(PreconditionFailed):
        nfa_witness(loop, 2)

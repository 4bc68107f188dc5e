from .standard import (
    complete_hypergraph,
    cycle_graph,
    edgeless,
    fano_plane,
    path_graph,
    random_hyperforest,
    single_edge,
)
from .witness import (
    NfaReport,
    SearchBudget,
    density_checks,
    density_witness,
    high_chromatic_sparse,
    nfa_witness,
    sparse_incomparability,
)

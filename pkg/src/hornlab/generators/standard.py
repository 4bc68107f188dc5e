"""Named and randomly grown structures used as templates and test corpora."""
from __future__ import annotations

import itertools
import random

from ..core import Hypergraph

__all__ = [
    "complete_hypergraph",
    "single_edge",
    "edgeless",
    "cycle_graph",
    "path_graph",
    "fano_plane",
    "random_hyperforest",
]

FANO_LINES = ((0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5))


def _vertices(n: int) -> tuple[str, ...]:
    return tuple(str(i) for i in range(n))


def complete_hypergraph(n: int, k: int) -> Hypergraph:
    """``K_n^(k)``: every subset of ``{0..n-1}`` of size 2 through k is an edge."""
    if n < 1 or k < 2:
        raise ValueError("complete_hypergraph needs n >= 1 and k >= 2")
    edges = [frozenset(c) for size in range(2, k + 1) for c in itertools.combinations(range(n), size)]
    return Hypergraph(_vertices(n), frozenset(edges))


def single_edge(size: int) -> Hypergraph:
    if size < 1:
        raise ValueError("an edge needs at least one vertex")
    return Hypergraph(_vertices(size), frozenset([frozenset(range(size))]))


def edgeless(n: int) -> Hypergraph:
    return Hypergraph(_vertices(n), frozenset())


def cycle_graph(n: int) -> Hypergraph:
    if n < 3:
        raise ValueError("a simple cycle needs at least 3 vertices")
    return Hypergraph(_vertices(n), frozenset(frozenset((i, (i + 1) % n)) for i in range(n)))


def path_graph(n: int) -> Hypergraph:
    """Path on n vertices (n-1 edges)."""
    return Hypergraph(_vertices(n), frozenset(frozenset((i, i + 1)) for i in range(n - 1)))


def fano_plane() -> Hypergraph:
    return Hypergraph(_vertices(7), frozenset(frozenset(line) for line in FANO_LINES))


def random_hyperforest(
    k: int,
    edges: int,
    seed: int = 0,
    attach: float = 0.75,
    max_vertices: int | None = None,
) -> Hypergraph:
    """Grow a k-uniform hyperforest one leaf at a time.

    Each new edge shares at most one vertex with what is already there, so
    no Berge cycle can form.  With probability ``attach`` the new edge hangs
    off a uniformly chosen existing vertex, otherwise it starts a new
    component.  ``max_vertices`` forces attachment once the vertex count
    would overflow.
    """
    if k < 2 or edges < 0:
        raise ValueError("random_hyperforest needs k >= 2 and edges >= 0")
    rng = random.Random(seed)
    n = 0
    out: list[frozenset[int]] = []
    for i in range(edges):
        detached = i == 0 or rng.random() >= attach
        # detach only if the remaining edges still fit when they all attach
        if detached and i > 0 and max_vertices is not None and n + k + (edges - i - 1) * (k - 1) > max_vertices:
            detached = False
        if detached:
            out.append(frozenset(range(n, n + k)))
            n += k
        else:
            if max_vertices is not None and n + k - 1 > max_vertices:
                raise ValueError(f"cannot place {edges} edges within {max_vertices} vertices")
            anchor = rng.randrange(n)
            out.append(frozenset([anchor, *range(n, n + k - 1)]))
            n += k - 1
    return Hypergraph(_vertices(n), frozenset(out))

"""Cycles, girth, leaves, colourings, distances and balls."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

from .core import Hypergraph, KStructure, induced_substructure
from .errors import CapExceeded, HasLoop, UnknownElement

INF = math.inf

__all__ = [
    "INF",
    "CycleWitness",
    "Ball",
    "shadow_graph",
    "girth",
    "shortest_cycle",
    "is_hyperforest",
    "find_leaf",
    "colouring",
    "chromatic_number",
    "distances_from",
    "distance",
    "n_ball",
    "connected_components",
    "is_bipartite",
    "odd_cycle",
]

Structure = Union[Hypergraph, KStructure]


def _vertex_count(s: Structure) -> int:
    return len(s.vertices) if isinstance(s, Hypergraph) else len(s.universe)


def _edge_sets(s: Structure):
    return s.edges if isinstance(s, Hypergraph) else s.underlying_sets


def shadow_graph(s: Structure) -> tuple[frozenset[int], ...]:
    """Adjacency lists of the graph joining distinct elements that share a tuple/edge."""
    adj: list[set[int]] = [set() for _ in range(_vertex_count(s))]
    for e in _edge_sets(s):
        for a in e:
            adj[a].update(e)
    for a, nbrs in enumerate(adj):
        nbrs.discard(a)
    return tuple(frozenset(x) for x in adj)


@dataclass(frozen=True)
class CycleWitness:
    """Berge cycle ``v0, e0, v1, e1, ...`` with ``v_i`` in ``e_i`` and ``e_{i+1}``."""

    vertices: tuple[int, ...]
    edges: tuple[frozenset[int], ...]

    def __len__(self):
        return len(self.vertices)

    def is_valid(self, h: Hypergraph) -> bool:
        n = len(self.vertices)
        if n < 2 or len(self.edges) != n:
            return False
        if len(set(self.vertices)) != n or len(set(self.edges)) != n:
            return False
        if any(e not in h.edges for e in self.edges):
            return False
        # accept either cyclic indexing convention
        forward = all(v in self.edges[i] and v in self.edges[(i + 1) % n] for i, v in enumerate(self.vertices))
        backward = all(v in self.edges[i] and v in self.edges[i - 1] for i, v in enumerate(self.vertices))
        return forward or backward


def shortest_cycle(h: Hypergraph) -> CycleWitness | None:
    """A shortest Berge cycle (length >= 2), found by BFS in the incidence graph.

    Incidence-graph nodes are vertices ``0..n-1`` followed by the edges in
    canonical order; a Berge n-cycle is a 2n-cycle there.
    """
    n = len(h.vertices)
    edges = h.sorted_edges
    m = len(edges)
    adj: list[list[int]] = [[] for _ in range(n + m)]
    for j, e in enumerate(edges):
        for v in e:
            adj[v].append(n + j)
            adj[n + j].append(v)

    best = None  # (length, parent array, u, w)
    for root in range(n + m):
        if not adj[root]:
            continue
        dist = [-1] * (n + m)
        parent = [-1] * (n + m)
        dist[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if best is not None and 2 * dist[u] + 1 >= best[0]:
                break
            for w in adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u] and parent[w] != u:
                    length = dist[u] + dist[w] + 1
                    if best is None or length < best[0]:
                        best = (length, parent, u, w)
        if best is not None and best[0] == 4:
            break
    if best is None:
        return None

    _, parent, u, w = best

    def up(x):
        path = [x]
        while parent[path[-1]] >= 0:
            path.append(parent[path[-1]])
        return path

    pu, pw = up(u), up(w)
    # pu and pw end at the root; at the minimum they share nothing else
    nodes = list(reversed(pu)) + pw[:-1]
    start = next(i for i, x in enumerate(nodes) if x < n)
    nodes = nodes[start:] + nodes[:start]
    verts = tuple(nodes[0::2])
    hedges = [frozenset(edges[x - n]) for x in nodes[1::2]]
    # v_i sits between nodes[2i-1] and nodes[2i+1]
    ordered = tuple(hedges[i - 1] for i in range(len(verts)))
    return CycleWitness(verts, ordered)


def girth(h: Hypergraph, min_length: int = 2) -> float:
    """Length of a shortest Berge cycle, or ``INF`` for hyperforests.

    ``min_length=1`` switches to the degenerate reading in which a single
    vertex inside a single edge already counts as a 1-cycle.
    """
    if min_length not in (1, 2):
        raise ValueError("min_length must be 1 or 2")
    if min_length == 1 and h.edges:
        return 1
    c = shortest_cycle(h)
    return INF if c is None else len(c)


def is_hyperforest(h: Hypergraph) -> bool:
    return shortest_cycle(h) is None


def find_leaf(h: Hypergraph) -> frozenset[int] | None:
    """First edge (canonical order) with at most one vertex shared with another edge."""
    degree = [0] * len(h.vertices)
    for e in h.edges:
        for v in e:
            degree[v] += 1
    for e in h.sorted_edges:
        if sum(1 for v in e if degree[v] > 1) <= 1:
            return frozenset(e)
    return None


def colouring(h: Hypergraph, n: int) -> tuple[int, ...] | None:
    """An n-colouring leaving no edge monochromatic, or None.

    Branch and bound: vertices in descending degree order, and a vertex may
    open at most one new colour class (so vertex 0 of the order gets colour 0).
    """
    if not h.loop_free:
        raise HasLoop("a singleton edge can never be properly coloured")
    nv = len(h.vertices)
    if nv == 0:
        return ()
    if n < 1:
        return None
    edges = [tuple(e) for e in h.sorted_edges]
    edges_of: list[list[int]] = [[] for _ in range(nv)]
    for j, e in enumerate(edges):
        for v in e:
            edges_of[v].append(j)
    order = sorted(range(nv), key=lambda v: (-len(edges_of[v]), v))
    colour = [-1] * nv
    unassigned = [len(e) for e in edges]

    def ok(v: int) -> bool:
        c = colour[v]
        for j in edges_of[v]:
            if unassigned[j] == 0 and all(colour[x] == c for x in edges[j]):
                return False
        return True

    def place(pos: int, used: int) -> bool:
        if pos == nv:
            return True
        v = order[pos]
        for c in range(min(n, used + 1)):
            colour[v] = c
            for j in edges_of[v]:
                unassigned[j] -= 1
            if ok(v) and place(pos + 1, max(used, c + 1)):
                return True
            for j in edges_of[v]:
                unassigned[j] += 1
        colour[v] = -1
        return False

    return tuple(colour) if place(0, 0) else None


def chromatic_number(h: Hypergraph, cap: int = 8) -> int:
    if not h.loop_free:
        raise HasLoop("chromatic number is undefined with singleton edges")
    if not h.vertices:
        return 0
    for n in range(1, cap + 1):
        if colouring(h, n) is not None:
            return n
    raise CapExceeded(f"chromatic number exceeds {cap}")


def _bfs(adj: Sequence[frozenset[int]], a: int) -> list[float]:
    dist: list[float] = [INF] * len(adj)
    dist[a] = 0
    queue = deque([a])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if dist[w] == INF:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def distances_from(s: KStructure, a: str) -> dict[str, float]:
    if a not in s.index:
        raise UnknownElement(f"unknown element {a!r}")
    dist = _bfs(shadow_graph(s), s.index[a])
    return dict(zip(s.universe, dist))


def distance(s: KStructure, a: str, b: str) -> float:
    if b not in s.index:
        raise UnknownElement(f"unknown element {b!r}")
    return distances_from(s, a)[b]


class Ball(NamedTuple):
    structure: KStructure
    centre: str
    boundary: frozenset[str]


def n_ball(s: KStructure, a: str, n: int) -> Ball:
    if n < 0:
        raise ValueError("radius must be non-negative")
    dist = distances_from(s, a)
    members = [x for x in s.universe if dist[x] <= n]
    boundary = frozenset(x for x in members if dist[x] == n)
    return Ball(induced_substructure(s, members), a, boundary)


def connected_components(s: Structure) -> list[list[int]]:
    adj = shadow_graph(s)
    seen = [False] * len(adj)
    comps = []
    for a in range(len(adj)):
        if seen[a]:
            continue
        comp, queue = [], deque([a])
        seen[a] = True
        while queue:
            u = queue.popleft()
            comp.append(u)
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def _graph_adjacency(s: KStructure) -> tuple[frozenset[int], ...]:
    if s.k != 2:
        raise ValueError("bipartiteness is defined here for k = 2 structures")
    if not s.loop_free:
        raise HasLoop("graph has a loop")
    return shadow_graph(s)


def odd_cycle(s: KStructure) -> list[str] | None:
    """Names along an odd cycle of the graph, or None when it is bipartite."""
    adj = _graph_adjacency(s)
    side = [-1] * len(adj)
    parent = [-1] * len(adj)
    depth = [0] * len(adj)
    for root in range(len(adj)):
        if side[root] >= 0:
            continue
        side[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in sorted(adj[u]):
                if side[w] < 0:
                    side[w] = 1 - side[u]
                    parent[w] = u
                    depth[w] = depth[u] + 1
                    queue.append(w)
                elif side[w] == side[u]:
                    a, b = [u], [w]
                    while a[-1] != b[-1]:
                        if depth[a[-1]] >= depth[b[-1]]:
                            a.append(parent[a[-1]])
                        else:
                            b.append(parent[b[-1]])
                    cycle = a + list(reversed(b[:-1]))
                    return [s.universe[x] for x in cycle]
    return None


def is_bipartite(s: KStructure) -> bool:
    return odd_cycle(s) is None

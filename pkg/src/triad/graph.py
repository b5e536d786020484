"""In-memory graphs and exact combinatorial oracles.

These are the ground truth the streaming estimators are verified against:
exact degrees and edge degrees, degeneracy by min-degree peeling, two
independent triangle counters, per-edge triangle counts, and the heavy /
costly classification consumed by the assignment rule. A Graph is immutable
after construction, so every oracle is safe to call concurrently.
"""

from __future__ import annotations

import heapq
from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

from . import edgelist
from .errors import InputError

Edge = tuple[int, int]
Triangle = tuple[int, int, int]


def canonical_edge(u: int, v: int) -> Edge:
    if u == v:
        raise InputError(f"self-loop at vertex {u}")
    return (u, v) if u < v else (v, u)


def pick_anchor(u: int, v: int, d_u: int, d_v: int) -> int:
    """Endpoint whose neighborhood defines N(e).

    The lower-degree endpoint; equal degrees go to the larger id. Samplers
    and oracles share this rule so they agree edge by edge.
    """
    if u > v:
        u, v = v, u
        d_u, d_v = d_v, d_u
    return u if d_u < d_v else v


def triangle_edges(tri: Sequence[int]) -> tuple[Edge, Edge, Edge]:
    a, b, c = sorted(tri)
    if a == b or b == c:
        raise InputError(f"degenerate triangle {tri!r}")
    return (a, b), (a, c), (b, c)


class Graph:
    """Immutable undirected simple graph on dense vertex ids [0, n)."""

    __slots__ = ("n", "m", "labels", "_adj", "_nbr_sets")

    def __init__(self, n: int, edges, labels: Sequence[int] | None = None):
        if n < 0:
            raise InputError(f"negative vertex count {n}")
        clean = edgelist.validate_edges(edges)
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in clean:
            if v >= n:
                raise InputError(f"vertex {v} out of range for n={n}")
            adj[u].append(v)
            adj[v].append(u)
        self.n = n
        self.m = len(clean)
        self.labels = tuple(labels) if labels is not None else None
        self._adj = tuple(tuple(sorted(nbrs)) for nbrs in adj)
        self._nbr_sets = tuple(frozenset(nbrs) for nbrs in adj)

    @classmethod
    def from_edges(cls, edges, n: int | None = None) -> "Graph":
        edges = list(edges)
        if n is None:
            n = 1 + max((max(u, v) for u, v in edges), default=-1)
        return cls(n, edges)

    @classmethod
    def from_file(cls, path) -> "Graph":
        """Load an edge list, remapping possibly-sparse ids to dense [0, n).

        The original ids are kept in `labels`, indexed by the dense id.
        """
        raw = edgelist.read_edges(path)
        ids = sorted({u for e in raw for u in e})
        remap = {orig: i for i, orig in enumerate(ids)}
        return cls(len(ids), [(remap[u], remap[v]) for u, v in raw], labels=ids)

    def degree(self, v: int) -> int:
        if not 0 <= v < self.n:
            raise InputError(f"vertex {v} out of range [0, {self.n})")
        return len(self._adj[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        if not 0 <= v < self.n:
            raise InputError(f"vertex {v} out of range [0, {self.n})")
        return self._adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        if not (0 <= u < self.n and 0 <= v < self.n):
            return False
        return v in self._nbr_sets[u]

    def edges(self) -> Iterator[Edge]:
        """Canonical edges in sorted order."""
        for u in range(self.n):
            for v in self._adj[u]:
                if v > u:
                    yield (u, v)

    def edge_list(self) -> list[Edge]:
        return list(self.edges())

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def degree(g: Graph, v: int) -> int:
    return g.degree(v)


def _require_edge(g: Graph, e: tuple[int, int]) -> Edge:
    u, v = canonical_edge(*e)
    if not g.has_edge(u, v):
        raise InputError(f"edge ({u}, {v}) not in graph")
    return (u, v)


def edge_degree(g: Graph, e: tuple[int, int]) -> int:
    """min(d_u, d_v) for an edge present in g."""
    u, v = _require_edge(g, e)
    return min(g.degree(u), g.degree(v))


def edge_anchor(g: Graph, e: tuple[int, int]) -> int:
    """The endpoint whose neighborhood defines N(e)."""
    u, v = _require_edge(g, e)
    return pick_anchor(u, v, g.degree(u), g.degree(v))


def sum_edge_degrees(g: Graph) -> int:
    """Total edge degree; at most 2 * m * degeneracy for every graph."""
    return sum(min(g.degree(u), g.degree(v)) for u, v in g.edges())


def degeneracy(g: Graph) -> int:
    """Exact degeneracy via min-degree peeling.

    Repeatedly remove a minimum-degree vertex; the answer is the largest
    degree observed at removal time. Lazy heap entries keep this O(m log n).
    """
    deg = [g.degree(v) for v in range(g.n)]
    heap = [(d, v) for v, d in enumerate(deg)]
    heapq.heapify(heap)
    removed = [False] * g.n
    best = 0
    while heap:
        d, v = heapq.heappop(heap)
        if removed[v] or d != deg[v]:
            continue
        removed[v] = True
        if d > best:
            best = d
        for w in g.neighbors(v):
            if not removed[w]:
                deg[w] -= 1
                heapq.heappush(heap, (deg[w], w))
    return best


def triangles_exact_naive(g: Graph) -> int:
    """Count triangles by testing every vertex triple.

    Cubic in n; meant as an independent cross-check for n up to a few
    hundred, not for production counting.
    """
    nbr = g._nbr_sets
    count = 0
    for a, b, c in combinations(range(g.n), 3):
        if b in nbr[a] and c in nbr[a] and c in nbr[b]:
            count += 1
    return count


def enumerate_triangles(g: Graph) -> Iterator[Triangle]:
    """Yield each triangle exactly once as a sorted triple (a < b < c).

    For every edge (u, v) with u < v the scan walks the anchor's neighbor
    list and keeps third vertices w > v that close the triangle, so a
    triangle is produced only from the edge joining its two smallest
    vertices. Each edge costs min(d_u, d_v) work.
    """
    nbr_sets = g._nbr_sets
    for u, v in g.edges():
        a = pick_anchor(u, v, g.degree(u), g.degree(v))
        other = v if a == u else u
        other_nbrs = nbr_sets[other]
        anchor_nbrs = g.neighbors(a)
        for w in anchor_nbrs[bisect_right(anchor_nbrs, v):]:
            if w in other_nbrs:
                yield (u, v, w)


def triangles_exact_cn(g: Graph) -> int:
    """Exact triangle count via per-edge neighborhood intersection.

    Counts each triangle once by ordered third-vertex enumeration (see
    enumerate_triangles); no division by 3 is involved.
    """
    return sum(1 for _ in enumerate_triangles(g))


@dataclass(frozen=True)
class EdgeProfile:
    edge: Edge
    d_e: int
    t_e: int


def per_edge_triangles(g: Graph) -> list[EdgeProfile]:
    """Exact per-edge triangle participation counts, in canonical edge order."""
    counts: Counter[Edge] = Counter()
    for tri in enumerate_triangles(g):
        for e in triangle_edges(tri):
            counts[e] += 1
    return [
        EdgeProfile(e, min(g.degree(e[0]), g.degree(e[1])), counts.get(e, 0))
        for e in g.edges()
    ]


@dataclass(frozen=True)
class EdgeClassification:
    """Heavy / costly flags at a given epsilon, for edges and triangles.

    heavy edge:  t_e > kappa / eps
    costly edge: t_e == 0, or d_e / t_e > m * kappa / (eps * T)
    heavy triangle:  all three edges heavy
    costly triangle: any edge costly
    """

    epsilon: float
    heavy_edges: frozenset[Edge]
    costly_edges: frozenset[Edge]
    heavy_triangles: tuple[Triangle, ...]
    costly_triangles: tuple[Triangle, ...]


def classify_edges(g: Graph, epsilon: float, t_total: int, kappa: int) -> EdgeClassification:
    # epsilon beyond 1 is allowed: the saturation checks classify at 4x the
    # run epsilon, which can exceed 1 at desk scale; the cutoffs stay
    # well-defined, they just shrink
    if t_total <= 0:
        raise InputError("classification needs a positive triangle count")
    if epsilon <= 0:
        raise InputError(f"epsilon must be positive, got {epsilon}")
    heavy_cut = kappa / epsilon
    costly_cut = g.m * kappa / (epsilon * t_total)
    heavy: set[Edge] = set()
    costly: set[Edge] = set()
    for p in per_edge_triangles(g):
        if p.t_e > heavy_cut:
            heavy.add(p.edge)
        if p.t_e == 0 or p.d_e / p.t_e > costly_cut:
            costly.add(p.edge)
    heavy_tris: list[Triangle] = []
    costly_tris: list[Triangle] = []
    for tri in enumerate_triangles(g):
        edges = triangle_edges(tri)
        if all(e in heavy for e in edges):
            heavy_tris.append(tri)
        if any(e in costly for e in edges):
            costly_tris.append(tri)
    return EdgeClassification(
        epsilon=epsilon,
        heavy_edges=frozenset(heavy),
        costly_edges=frozenset(costly),
        heavy_triangles=tuple(heavy_tris),
        costly_triangles=tuple(costly_tris),
    )

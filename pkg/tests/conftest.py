"""Shared fixtures, strategies, and independent miniature oracles."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import hypothesis.strategies as st
import pytest

from triad.graph import Graph, canonical_edge, pick_anchor, sum_edge_degrees


def k_complete(k: int) -> Graph:
    return Graph(k, list(combinations(range(k), 2)))


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_bipartite(p: int, q: int) -> Graph:
    return Graph(p + q, [(i, p + j) for i in range(p) for j in range(q)])


def wheel_by_hand(n: int) -> Graph:
    """Hub 0 plus an (n-1)-cycle, built directly for cross-checks."""
    edges = [(0, i) for i in range(1, n)]
    edges += [(i, i + 1) for i in range(1, n - 1)]
    edges.append((1, n - 1))
    return Graph(n, edges)


def brute_degeneracy(g: Graph) -> int:
    """Max over all vertex subsets of the induced minimum degree.

    Exponential; only usable for n <= 8.
    """
    assert g.n <= 8
    best = 0
    for size in range(1, g.n + 1):
        for sub in combinations(range(g.n), size):
            ss = set(sub)
            mind = min(sum(1 for w in g.neighbors(v) if w in ss) for v in sub)
            if mind > best:
                best = mind
    return best


def brute_triangle_count(g: Graph) -> int:
    count = 0
    for a, b, c in combinations(range(g.n), 3):
        if g.has_edge(a, b) and g.has_edge(a, c) and g.has_edge(b, c):
            count += 1
    return count


def lowest_degree_edge(g: Graph, tri) -> tuple[int, int]:
    """The oracle-mode charging rule, restated: min (d_e, canonical edge)."""
    a, b, c = sorted(tri)
    candidates = []
    for e in ((a, b), (a, c), (b, c)):
        candidates.append((min(g.degree(e[0]), g.degree(e[1])), e))
    return min(candidates)[1]


def exact_expected_x(g: Graph) -> Fraction:
    """E[X] of the oracle-mode estimator by full outcome enumeration.

    Pick e with probability d_e/d_E, then w uniform over the anchor's
    neighborhood; score d_E when the wedge closes into a triangle charged
    to e. Exact rational arithmetic, independent of the sampled code path.
    """
    d_e_total = sum_edge_degrees(g)
    total = Fraction(0)
    for u, v in g.edges():
        d_u, d_v = g.degree(u), g.degree(v)
        d_e = min(d_u, d_v)
        anchor = pick_anchor(u, v, d_u, d_v)
        other = v if anchor == u else u
        pr_edge = Fraction(d_e, d_e_total)
        for w in g.neighbors(anchor):
            if w == other or not g.has_edge(other, w):
                continue
            if lowest_degree_edge(g, (u, v, w)) == canonical_edge(u, v):
                total += pr_edge * Fraction(1, d_e) * d_e_total
    return total


@st.composite
def small_graphs(draw, max_n: int = 14, min_n: int = 2):
    n = draw(st.integers(min_n, max_n))
    possible = list(combinations(range(n), 2))
    edges = draw(st.lists(st.sampled_from(possible), unique=True,
                          max_size=len(possible)))
    return Graph(n, edges)


@pytest.fixture
def k3() -> Graph:
    return k_complete(3)


@pytest.fixture
def k4() -> Graph:
    return k_complete(4)

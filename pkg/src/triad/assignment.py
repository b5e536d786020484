"""Rule deciding which edge, if any, a discovered triangle is charged to.

Every edge of the triangle gets an estimated incident-triangle count: the
fraction of wedge samples from its anchor that closed, scaled by the edge
degree, or infinity outright when the edge degree exceeds the cheapness
cutoff m * kappa^2 / (eps^2 * T). The edge with the smallest estimate wins
(ties by canonical edge order) unless even that estimate exceeds the load
cutoff kappa / (2 * eps), in which case the triangle stays unassigned. A
write-once memo table pins the first decision per triangle, so repeated
queries are consistent and each triangle is charged to at most one edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Sequence

from .errors import ConfigError, InputError, SchedulingError
from .graph import Graph, Edge, Triangle, per_edge_triangles, triangle_edges

INFINITY = math.inf


def degree_cutoff(m: int, epsilon: float, t_hat: int, kappa_hat: int) -> float:
    """Edges with d_e above this are never estimated, only skipped."""
    return m * kappa_hat * kappa_hat / (epsilon * epsilon * t_hat)


def load_cutoff(epsilon: float, kappa_hat: int) -> float:
    """Largest estimated count an edge may have and still accept a triangle."""
    return kappa_hat / (2.0 * epsilon)


def compute_s(n: int, m: int, epsilon: float, t_hat: int, kappa_hat: int,
              c_s: float = 61.0, scale: float = 1.0,
              max_degree: Optional[int] = None) -> int:
    """Wedge samples per estimated edge.

    ceil(scale * c_s * log2(n) / eps^2 * m * kappa_hat / t_hat), capped at
    the maximum degree when that is known; per-edge saturation (sampling the
    whole neighborhood once s >= d_e) is handled at request time.
    """
    if t_hat < 1:
        raise ConfigError(f"t_hat must be >= 1, got {t_hat}")
    if epsilon <= 0:
        raise ConfigError(f"epsilon must be positive, got {epsilon}")
    log2n = math.log2(n) if n >= 2 else 1.0
    raw = c_s * log2n / (epsilon * epsilon) * m * kappa_hat / t_hat
    s = max(1, math.ceil(scale * raw))
    if max_degree is not None:
        s = min(s, max_degree)
    return s


@dataclass(frozen=True)
class EdgeEstimate:
    """Estimated incident-triangle count for one edge of a triangle."""

    edge: Edge
    d_e: int
    y: float  # INFINITY when the degree cutoff tripped


class _Missing:
    pass


_MISSING = _Missing()


class AssignmentTable:
    """Write-once memo of triangle -> assigned edge (or None).

    Scoped to a single estimator repetition; sharing it across repetitions
    would correlate them.
    """

    def __init__(self):
        self._entries: dict[Triangle, Optional[Edge]] = {}

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, tri: Triangle) -> bool:
        return tri in self._entries

    def lookup(self, tri: Triangle):
        return self._entries.get(tri, _MISSING)

    def record(self, tri: Triangle, result: Optional[Edge]) -> None:
        prior = self._entries.get(tri, _MISSING)
        if prior is not _MISSING and prior != result:
            raise SchedulingError(f"conflicting assignment recorded for {tri}")
        self._entries[tri] = result

    def items(self) -> Iterator[tuple[Triangle, Optional[Edge]]]:
        return iter(self._entries.items())

    def as_dict(self) -> dict[Triangle, Optional[Edge]]:
        return dict(self._entries)


def assign_triangle(tri: Sequence[int], estimates: Mapping[Edge, EdgeEstimate],
                    epsilon: float, kappa_hat: int,
                    table: AssignmentTable) -> Optional[Edge]:
    """Memoized choice of the edge a triangle is charged to, or None.

    `estimates` must cover all three edges; a finite-degree edge without an
    estimate indicates a pass-scheduling bug upstream.
    """
    key: Triangle = tuple(sorted(tri))
    cached = table.lookup(key)
    if cached is not _MISSING:
        return cached
    edges = triangle_edges(key)
    for f in edges:
        if f not in estimates:
            raise SchedulingError(f"no wedge estimate for edge {f} of triangle {key}")
    e_min = min(edges, key=lambda f: (estimates[f].y, f))
    result = None if estimates[e_min].y > load_cutoff(epsilon, kappa_hat) else e_min
    table.record(key, result)
    return result


def is_assigned(tri: Sequence[int], edge: tuple[int, int],
                estimates: Mapping[Edge, EdgeEstimate], epsilon: float,
                kappa_hat: int, table: AssignmentTable) -> bool:
    """True iff the triangle is charged to exactly this edge."""
    key: Triangle = tuple(sorted(tri))
    e = (edge[0], edge[1]) if edge[0] < edge[1] else (edge[1], edge[0])
    if e not in triangle_edges(key):
        raise InputError(f"edge {e} is not part of triangle {key}")
    return assign_triangle(key, estimates, epsilon, kappa_hat, table) == e


def saturated_estimates(g: Graph, epsilon: float, t_hat: int,
                        kappa_hat: int) -> dict[Edge, EdgeEstimate]:
    """Exact estimates for every edge: y = true t_e, or infinity past the
    degree cutoff. This is what wedge sampling converges to once the sample
    count covers each neighborhood, and what the deterministic saturation
    tests feed the rule."""
    cut = degree_cutoff(g.m, epsilon, t_hat, kappa_hat)
    out: dict[Edge, EdgeEstimate] = {}
    for p in per_edge_triangles(g):
        y = INFINITY if p.d_e > cut else float(p.t_e)
        out[p.edge] = EdgeEstimate(p.edge, p.d_e, y)
    return out

"""Degree-oracle triangle estimator: three passes, degree-biased sampling.

One instance samples an edge with probability d_e / d_E by weighted
reservoir (weights come from the oracle as edges arrive), then draws a
uniform neighbor of the edge's anchor, then closure-checks the wedge. The
instance's value is d_E when the wedge closed into a triangle that the
fixed rule charges to the sampled edge, else 0: unbiased for the triangle
count, with second moment at most d_E * T. Triangles are charged to their
lowest-degree edge, canonical order breaking ties, so every triangle is
charged exactly once.

Any number of instances ride the same three physical passes; the final
estimate is a median of group means.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InputError
from .graph import Graph, canonical_edge, pick_anchor
from .sampling import (
    ROLE_NEIGHBOR,
    ROLE_WEIGHTED_SAMPLE,
    ClosureBank,
    NeighborRequest,
    NeighborSampleBank,
    WeightedReservoirBank,
    run_pass,
    substream,
)


class DegreeOracle:
    """Exact degree lookups backed by an in-memory graph; calls are counted."""

    def __init__(self, graph: Graph):
        self._graph = graph
        self.queries = 0

    def __call__(self, v: int) -> int:
        self.queries += 1
        return self._graph.degree(v)


class _WeightedEdgeObserver:
    """Feeds the weighted bank with d_e weights and accumulates d_E."""

    def __init__(self, bank: WeightedReservoirBank, oracle):
        self._bank = bank
        self._oracle = oracle
        self.d_e_total = 0

    def observe(self, u: int, v: int) -> None:
        d_u = self._oracle(u)
        d_v = self._oracle(v)
        w = d_u if d_u < d_v else d_v
        self.d_e_total += w
        self._bank.observe((u, v, d_u, d_v), w)


@dataclass(frozen=True)
class IdealReport:
    estimate: float
    passes: int
    instances: int
    groups: int
    group_size: int
    d_e_total: int
    oracle_queries: int
    closure_hits: int
    seed: int


def ideal_sample(stream, oracle, count: int, seed: int) -> tuple[np.ndarray, int, int]:
    """`count` independent instance values over three shared passes.

    Returns (values, d_E, closure hits). Each value is 0 or d_E.
    """
    if count < 1:
        raise InputError(f"instance count must be >= 1, got {count}")

    # pass 1: weighted edge pick per instance, accumulating d_E on the way
    bank = WeightedReservoirBank(count, substream(seed, ROLE_WEIGHTED_SAMPLE))
    watcher = _WeightedEdgeObserver(bank, oracle)
    run_pass(stream, [watcher])
    if bank.offered == 0:
        raise InputError("cannot estimate on a stream with no edges")
    picks = bank.samples()
    d_e_total = watcher.d_e_total

    # pass 2: one uniform neighbor of each instance's anchor
    requests = []
    anchors = []
    for (u, v, d_u, d_v) in picks:
        a = pick_anchor(u, v, d_u, d_v)
        anchors.append(a)
        requests.append(NeighborRequest((u, v), a, 1))
    nbr_bank = NeighborSampleBank(requests, seed, role=ROLE_NEIGHBOR)
    run_pass(stream, [nbr_bank])
    sampled = nbr_bank.results()

    # pass 3: closure checks for every live wedge
    pairs = set()
    wedges: list = [None] * count
    for i, ((u, v, _, _), a, res) in enumerate(zip(picks, anchors, sampled)):
        if not res:
            continue
        w = res[0]
        other = v if a == u else u
        if w == other:
            continue  # degenerate wedge, cannot close
        pair = canonical_edge(other, w)
        pairs.add(pair)
        wedges[i] = (w, pair)
    closure = ClosureBank(pairs=pairs)
    run_pass(stream, [closure])

    xs = np.zeros(count, dtype=np.float64)
    hits = 0
    for i, wedge in enumerate(wedges):
        if wedge is None:
            continue
        w, pair = wedge
        if not closure.present[pair]:
            continue
        hits += 1
        u, v, d_u, d_v = picks[i]
        d_w = oracle(w)
        tri_edges = (
            (min(d_u, d_v), canonical_edge(u, v)),
            (min(d_u, d_w), canonical_edge(u, w)),
            (min(d_v, d_w), canonical_edge(v, w)),
        )
        charged = min(tri_edges)[1]
        if charged == canonical_edge(u, v):
            xs[i] = d_e_total
    return xs, d_e_total, hits


def ideal_estimate_once(stream, oracle, seed: int) -> float:
    """A single instance value: 0 or d_E, unbiased for T. Three passes."""
    xs, _, _ = ideal_sample(stream, oracle, 1, seed)
    return float(xs[0])


def ideal_estimate(stream, oracle, epsilon: float, t_hat: int, seed: int,
                   c: float = 4.0, groups: int = 7) -> tuple[float, IdealReport]:
    """Median of group means over ceil(c * d_E / (eps^2 * t_hat)) instances
    per group.

    d_E is harvested from the stats pass using the oracle, so sizing the
    instance bank costs nothing extra; the estimator itself still takes
    exactly three passes.
    """
    if not 0 < epsilon < 1:
        raise ConfigError(f"epsilon must lie in (0, 1), got {epsilon}")
    if t_hat < 1:
        raise ConfigError(f"t_hat must be >= 1, got {t_hat}")
    if groups < 1 or groups % 2 == 0:
        raise ConfigError(f"groups must be odd and positive, got {groups}")

    # sizing pass, not charged to the 3-pass budget
    d_e_total = 0
    m = 0
    for u, v in stream.edges():
        d_e_total += min(oracle(u), oracle(v))
        m += 1
    if m == 0:
        raise InputError("cannot estimate on a stream with no edges")

    group_size = max(1, math.ceil(c * d_e_total / (epsilon * epsilon * t_hat)))
    count = groups * group_size
    xs, d_e_check, hits = ideal_sample(stream, oracle, count, seed)
    assert d_e_check == d_e_total
    means = xs.reshape(groups, group_size).mean(axis=1)
    estimate = float(np.median(means))
    report = IdealReport(
        estimate=estimate,
        passes=3,
        instances=count,
        groups=groups,
        group_size=group_size,
        d_e_total=d_e_total,
        oracle_queries=oracle.queries,
        closure_hits=hits,
        seed=seed,
    )
    return estimate, report

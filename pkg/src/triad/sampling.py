"""Seeded samplers batched onto shared stream passes.

All pseudo-randomness flows through `substream`, which derives an
independent generator from (seed, role, key...) using SeedSequence spawn
keys. Banks that multiplex many one-slot reservoirs draw one vector of
uniforms per arriving item, one lane per slot, so a bank costs a single
generator and a single pass no matter how many slots it carries; lanes of a
counter-derived generator are independent streams, and a fixed (seed,
requests, stream order) reproduces every output bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import InputError
from .graph import canonical_edge

Edge = tuple[int, int]

# Role tags keep substreams for different duties disjoint under one seed.
ROLE_SHUFFLE = 0
ROLE_EDGE_SAMPLE = 1
ROLE_WEIGHTED_SAMPLE = 2
ROLE_PICK = 3
ROLE_NEIGHBOR = 4
ROLE_WEDGE = 5
ROLE_GENERATE = 6


def substream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for (seed, key...); same inputs, same stream."""
    if seed < 0:
        raise InputError(f"seed must be non-negative, got {seed}")
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.default_rng(ss)


def run_pass(stream, observers: Sequence) -> None:
    """Drive one full pass, feeding every edge to every observer."""
    stream.begin_pass()
    try:
        while True:
            e = stream.next_edge()
            if e is None:
                break
            u, v = e
            for ob in observers:
                ob.observe(u, v)
    except BaseException:
        stream.abort_pass()
        raise
    stream.end_pass()


class Reservoir:
    """Uniform sample of `capacity` items from a stream of unknown length.

    After L >= capacity offers each item is retained with probability
    capacity / L; items within one reservoir are sampled without
    replacement.
    """

    def __init__(self, capacity: int, rng: np.random.Generator):
        if capacity < 1:
            raise InputError(f"capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self.seen = 0
        self.items: list = []
        self._rng = rng

    def offer(self, item) -> None:
        self.seen += 1
        if len(self.items) < self.capacity:
            self.items.append(item)
            return
        j = int(self._rng.integers(self.seen))
        if j < self.capacity:
            self.items[j] = item


class UniformEdgeBank:
    """r parallel one-slot uniform reservoirs over one pass.

    Together the slots form a with-replacement sample of r edges: each slot
    independently holds a uniform edge of the stream.
    """

    def __init__(self, r: int, rng: np.random.Generator):
        if r < 1:
            raise InputError(f"sample size must be >= 1, got {r}")
        self._r = r
        self._rng = rng
        self._seen = 0
        self._slots: list = [None] * r

    def observe(self, u: int, v: int) -> None:
        self._seen += 1
        # replacement probability 1/seen; the first edge fills every slot
        lanes = np.flatnonzero(self._rng.random(self._r) < 1.0 / self._seen)
        if lanes.size:
            edge = (u, v)
            slots = self._slots
            for i in lanes:
                slots[i] = edge

    def sample(self) -> list[Edge]:
        if self._seen == 0:
            raise InputError("cannot sample from an empty stream")
        return list(self._slots)


class WeightedReservoirBank:
    """k parallel one-slot weighted reservoirs.

    Slot i ends up holding item e with probability weight(e) / total weight;
    arriving weight w replaces a slot with probability w / (running total).
    """

    def __init__(self, k: int, rng: np.random.Generator):
        if k < 1:
            raise InputError(f"instance count must be >= 1, got {k}")
        self._k = k
        self._rng = rng
        self._slots: list = [None] * k
        self.total_weight = 0.0
        self.offered = 0

    def observe(self, item, weight: float) -> None:
        if weight < 0:
            raise InputError(f"negative weight {weight}")
        self.offered += 1
        if weight == 0:
            return
        self.total_weight += weight
        lanes = np.flatnonzero(self._rng.random(self._k) < weight / self.total_weight)
        if lanes.size:
            slots = self._slots
            for i in lanes:
                slots[i] = item

    def samples(self) -> list:
        if self.total_weight <= 0:
            raise InputError("no positive-weight items were offered")
        return list(self._slots)


def weighted_pick(weights: Sequence[float], count: int, rng: np.random.Generator) -> np.ndarray:
    """`count` independent indices drawn proportionally to `weights`.

    Consumes no pass; the weights are already in memory.
    """
    w = np.asarray(weights, dtype=float)
    if w.size == 0:
        raise InputError("empty weight vector")
    if (w < 0).any():
        raise InputError("negative weight")
    total = w.sum()
    if total <= 0:
        raise InputError("weights sum to zero")
    return rng.choice(w.size, size=count, replace=True, p=w / total)


@dataclass(frozen=True)
class NeighborRequest:
    """Ask for uniform neighbors of `anchor`, an endpoint of `edge`.

    want=N draws N independent uniform samples from N(anchor); want=None
    collects the whole neighborhood instead (used when a requested sample
    count would cover every neighbor, making downstream estimates exact).
    """

    edge: Edge
    anchor: int
    want: Optional[int]

    def __post_init__(self):
        if self.anchor not in self.edge:
            raise InputError(f"anchor {self.anchor} is not an endpoint of {self.edge}")
        if self.want is not None and self.want < 1:
            raise InputError(f"want must be >= 1 or None, got {self.want}")


class _AnchorLanes:
    __slots__ = ("rng", "k", "cur", "t")

    def __init__(self, rng, k):
        self.rng = rng
        self.k = k
        self.cur = np.full(k, -1, dtype=np.int64)
        self.t = 0


class NeighborSampleBank:
    """Service many neighbor requests simultaneously in one pass.

    Sampled requests anchored at the same vertex share a lane vector: when
    the t-th edge incident to the anchor arrives, every lane independently
    replaces its content with probability 1/t, so each lane is a one-slot
    uniform reservoir over N(anchor). Lane randomness is keyed by
    (seed, key..., role, anchor), independent across anchors and of any
    requests elsewhere. Full-scan collections are shared per anchor.
    """

    def __init__(self, requests: Iterable[NeighborRequest], seed: int,
                 role: int = ROLE_NEIGHBOR, key: tuple[int, ...] = ()):
        self._requests = list(requests)
        self._lane_of: list = []  # per request: ("lanes", anchor, start, want) | ("full", anchor)
        lane_counts: dict[int, int] = {}
        self._full: dict[int, list[int]] = {}
        for req in self._requests:
            if req.want is None:
                self._full.setdefault(req.anchor, [])
                self._lane_of.append(("full", req.anchor))
            else:
                start = lane_counts.get(req.anchor, 0)
                lane_counts[req.anchor] = start + req.want
                self._lane_of.append(("lanes", req.anchor, start, req.want))
        self._lanes = {
            anchor: _AnchorLanes(substream(seed, *key, role, anchor), k)
            for anchor, k in lane_counts.items()
        }

    def observe(self, u: int, v: int) -> None:
        lanes = self._lanes
        full = self._full
        if u in lanes or u in full:
            self._feed(u, v)
        if v in lanes or v in full:
            self._feed(v, u)

    def _feed(self, anchor: int, nbr: int) -> None:
        st = self._lanes.get(anchor)
        if st is not None:
            st.t += 1
            hit = np.flatnonzero(st.rng.random(st.k) < 1.0 / st.t)
            if hit.size:
                st.cur[hit] = nbr
        bucket = self._full.get(anchor)
        if bucket is not None:
            bucket.append(nbr)

    def results(self) -> list[list[int]]:
        """Per request: the sampled neighbors, in lane order.

        A request whose anchor saw no incident edge yields an empty list.
        """
        out: list[list[int]] = []
        for tag in self._lane_of:
            if tag[0] == "full":
                out.append(list(self._full[tag[1]]))
            else:
                _, anchor, start, want = tag
                cur = self._lanes[anchor].cur[start:start + want]
                out.append([int(x) for x in cur if x >= 0])
        return out


@dataclass
class ClosureQuery:
    """Vertex pairs to test for edge-ness plus vertices needing exact degrees."""

    pairs: Iterable[tuple[int, int]] = ()
    degree_vertices: Iterable[int] = ()


class ClosureBank:
    """Answer pair-membership and degree queries exactly in one pass."""

    def __init__(self, pairs: Iterable[tuple[int, int]] = (),
                 degree_vertices: Iterable[int] = ()):
        self.present: dict[Edge, bool] = {canonical_edge(*p): False for p in pairs}
        self.degrees: dict[int, int] = {v: 0 for v in degree_vertices}

    def observe(self, u: int, v: int) -> None:
        deg = self.degrees
        if u in deg:
            deg[u] += 1
        if v in deg:
            deg[v] += 1
        pres = self.present
        e = (u, v) if u < v else (v, u)
        if e in pres:
            pres[e] = True


@dataclass(frozen=True)
class ClosureResult:
    present: Mapping[Edge, bool]
    degrees: Mapping[int, int]


def uniform_edge_sample(stream, r: int, seed: int, key: tuple[int, ...] = ()) -> list[Edge]:
    """r uniform-with-replacement edges in one pass."""
    bank = UniformEdgeBank(r, substream(seed, *key, ROLE_EDGE_SAMPLE))
    run_pass(stream, [bank])
    return bank.sample()


def neighbor_sample_pass(stream, requests: Iterable[NeighborRequest], seed: int,
                         key: tuple[int, ...] = ()) -> list[list[int]]:
    """Service every request in a single pass; see NeighborSampleBank."""
    bank = NeighborSampleBank(requests, seed, key=key)
    run_pass(stream, [bank])
    return bank.results()


def closure_check_pass(stream, query: ClosureQuery) -> ClosureResult:
    """Answer a batch of pair / degree queries in a single pass."""
    bank = ClosureBank(query.pairs, query.degree_vertices)
    run_pass(stream, [bank])
    return ClosureResult(present=bank.present, degrees=bank.degrees)

"""Seeded graph-family generators with closed-form ground truth.

Every family that ships a GroundTruth guarantees it matches the exact
oracles; small instances of each family are cross-checked in the test
suite. The block-bipartite family encodes two fixed-weight indicator
strings the way communication-complexity reductions do, so YES instances
are triangle-free and NO instances carry exactly shared * p^2 * q
triangles.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import InputError
from .graph import Graph, degeneracy
from .sampling import ROLE_GENERATE, substream

_SUBROLE_LB = 0
_SUBROLE_PA = 1
_SUBROLE_ER = 2


@dataclass(frozen=True)
class GroundTruth:
    n: int
    m: int
    triangles: int
    kappa: int

    def as_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "T": self.triangles, "kappa": self.kappa}


def gen_wheel(n: int) -> tuple[Graph, GroundTruth]:
    """Hub vertex 0 joined to an (n-1)-cycle.

    m = 2(n-1), kappa = 3, and T = n-1 for n >= 5. The n = 4 wheel is the
    complete graph on four vertices, whose rim contributes a fourth
    triangle.
    """
    if n < 4:
        raise InputError(f"wheel needs n >= 4, got {n}")
    edges = [(0, i) for i in range(1, n)]
    edges += [(i, i + 1) for i in range(1, n - 1)]
    edges.append((1, n - 1))
    g = Graph(n, edges)
    triangles = 4 if n == 4 else n - 1
    return g, GroundTruth(n=n, m=2 * (n - 1), triangles=triangles, kappa=3)


def gen_book(k: int) -> tuple[Graph, GroundTruth]:
    """k triangles sharing the spine edge (0, 1).

    n = k + 2, m = 2k + 1, T = k, kappa = 2. The spine participates in
    every triangle while each page edge participates in exactly one, the
    worst case for per-edge triangle variance.
    """
    if k < 1:
        raise InputError(f"book needs k >= 1 pages, got {k}")
    edges = [(0, 1)]
    for page in range(2, k + 2):
        edges.append((0, page))
        edges.append((1, page))
    g = Graph(k + 2, edges)
    return g, GroundTruth(n=k + 2, m=2 * k + 1, triangles=k, kappa=2)


@dataclass(frozen=True)
class LbSpec:
    """Block-bipartite hard instance: sides of size p, `blocks` blocks of
    size q, and two indicator strings with exactly blocks/3 ones each.

    kind "yes" requires disjoint supports (triangle-free instance); "no"
    requires at least one shared index.
    """

    p: int
    q: int
    blocks: int
    x: tuple[int, ...]
    y: tuple[int, ...]
    kind: str

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise InputError("p and q must be >= 1")
        if self.blocks < 3 or self.blocks % 3 != 0:
            raise InputError(f"block count must be a positive multiple of 3, got {self.blocks}")
        if len(self.x) != self.blocks or len(self.y) != self.blocks:
            raise InputError("indicator strings must have one bit per block")
        ones = self.blocks // 3
        if sum(self.x) != ones or sum(self.y) != ones:
            raise InputError(f"indicator strings must have exactly {ones} ones")
        shared = self.shared_indices()
        if self.kind == "yes" and shared:
            raise InputError("yes instance must have disjoint supports")
        if self.kind == "no" and not shared:
            raise InputError("no instance must share at least one index")
        if self.kind not in ("yes", "no"):
            raise InputError(f"kind must be 'yes' or 'no', got {self.kind!r}")

    def shared_indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.blocks) if self.x[i] == 1 == self.y[i])


def lb_spec(p: int, q: int, blocks: int, kind: str, seed: int,
            shared: int = 1) -> LbSpec:
    """Seeded indicator strings. NO instances share exactly `shared`
    indices; one shared index is the hardest instance to tell apart."""
    if blocks < 3 or blocks % 3 != 0:
        raise InputError(f"block count must be a positive multiple of 3, got {blocks}")
    ones = blocks // 3
    if kind == "yes":
        shared = 0
    elif kind == "no":
        if not 1 <= shared <= ones:
            raise InputError(f"shared index count must lie in [1, {ones}], got {shared}")
    else:
        raise InputError(f"kind must be 'yes' or 'no', got {kind!r}")
    rng = substream(seed, ROLE_GENERATE, _SUBROLE_LB)
    perm = [int(i) for i in rng.permutation(blocks)]
    x_support = set(perm[:ones])
    y_support = set(perm[:shared]) | set(perm[ones:2 * ones - shared])
    x = tuple(1 if i in x_support else 0 for i in range(blocks))
    y = tuple(1 if i in y_support else 0 for i in range(blocks))
    return LbSpec(p=p, q=q, blocks=blocks, x=x, y=y, kind=kind)


def gen_lb_instance(spec: LbSpec) -> tuple[Graph, GroundTruth]:
    """Materialize a block-bipartite instance.

    Vertices: A = [0, p), B = [p, 2p), block i = [2p + i*q, 2p + (i+1)*q).
    Edges: all of A x B; block i joined to all of A when x_i = 1 and to all
    of B when y_i = 1. Blocks with both bits zero stay isolated but still
    count toward n. T = shared * p^2 * q exactly: triangles need one vertex
    in A, one in B, and one in a doubly-connected block. kappa = p for YES
    instances; NO instances are computed by peeling and land in [p, 2p].
    """
    p, q = spec.p, spec.q
    a = range(p)
    b = range(p, 2 * p)
    edges = [(u, v) for u in a for v in b]
    for i in range(spec.blocks):
        block = range(2 * p + i * q, 2 * p + (i + 1) * q)
        if spec.x[i]:
            edges.extend((u, w) for u in a for w in block)
        if spec.y[i]:
            edges.extend((v, w) for v in b for w in block)
    n = 2 * p + spec.blocks * q
    g = Graph(n, edges)
    shared = len(spec.shared_indices())
    m = p * p + 2 * (spec.blocks // 3) * p * q
    kappa = p if spec.kind == "yes" else degeneracy(g)
    return g, GroundTruth(n=n, m=m, triangles=shared * p * p * q, kappa=kappa)


def gen_preferential_attachment(n: int, attach: int, seed: int) -> Graph:
    """Growth process: each new vertex bonds to `attach` distinct existing
    vertices, chosen proportionally to degree.

    Creation order gives every vertex at most `attach` later-to-earlier
    edges, so the degeneracy never exceeds `attach`. attach=1 grows a tree.
    """
    if attach < 1:
        raise InputError(f"attach must be >= 1, got {attach}")
    if n <= attach:
        raise InputError(f"need n > attach, got n={n}, attach={attach}")
    rng = substream(seed, ROLE_GENERATE, _SUBROLE_PA)
    edges: list[tuple[int, int]] = []
    repeated: list[int] = []  # one entry per edge endpoint, drives the bias
    for v in range(attach, n):
        if not repeated:
            targets = set(range(attach))
        else:
            targets = set()
            while len(targets) < attach:
                targets.add(repeated[int(rng.integers(len(repeated)))])
        for t in sorted(targets):
            edges.append((t, v))
            repeated.append(t)
            repeated.append(v)
    return Graph(n, edges)


def gen_erdos_renyi(n: int, prob: float, seed: int) -> Graph:
    """Each vertex pair is an edge independently with probability `prob`."""
    if not 0 <= prob <= 1:
        raise InputError(f"probability must lie in [0, 1], got {prob}")
    if n < 0:
        raise InputError(f"negative vertex count {n}")
    pairs = list(combinations(range(n), 2))
    if prob == 0 or not pairs:
        return Graph(n, [])
    if prob == 1:
        return Graph(n, pairs)
    rng = substream(seed, ROLE_GENERATE, _SUBROLE_ER)
    mask = rng.random(len(pairs)) < prob
    return Graph(n, [e for e, keep in zip(pairs, mask) if keep])

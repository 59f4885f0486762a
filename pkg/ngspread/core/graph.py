"""Bit-row simple graphs, standard constructors and canonical forms.

Every row of a `Graph` is a Python int whose bit v is set iff the vertex is adjacent to v.
Vertex labels are 0-based and constructors are deterministic: the clique of a complete split
graph occupies the lowest labels.
"""

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from ngspread.errors import InvalidParameterError, SizeLimitError

MAX_ORDER = 64
CANONICAL_MAX_ORDER = 10


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on vertices 0..n-1."""

    n: int
    rows: Tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_ORDER:
            raise InvalidParameterError(f"vertex count must be in [1, {MAX_ORDER}], got {self.n}")
        if len(self.rows) != self.n:
            raise InvalidParameterError("one adjacency row per vertex is required")
        full = (1 << self.n) - 1
        for u, row in enumerate(self.rows):
            if row & ~full:
                raise InvalidParameterError(f"row {u} has bits beyond position {self.n - 1}")
            if (row >> u) & 1:
                raise InvalidParameterError(f"loop at vertex {u}")
            for v in _bits(row):
                if not (self.rows[v] >> u) & 1:
                    raise InvalidParameterError(f"asymmetric adjacency at ({u}, {v})")

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        """Build a graph from (u, v) pairs; duplicates are ignored, loops rejected."""
        if not 1 <= n <= MAX_ORDER:
            raise InvalidParameterError(f"vertex count must be in [1, {MAX_ORDER}], got {n}")
        rows = [0] * n
        for u, v in edges:
            _check_pair(n, u, v)
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.rows[u] >> v) & 1)

    def neighbours(self, v: int) -> List[int]:
        return list(_bits(self.rows[v]))

    def degrees(self) -> List[int]:
        return [bin(row).count("1") for row in self.rows]

    def edge_count(self) -> int:
        return sum(self.degrees()) // 2

    def max_degree(self) -> int:
        return max(self.degrees())

    def edges(self) -> List[Tuple[int, int]]:
        """Edges as (u, v) with u < v, sorted lexicographically."""
        return [(u, v) for u in range(self.n) for v in _bits(self.rows[u]) if u < v]

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"


@dataclass(frozen=True, order=True)
class CanonicalForm:
    """Labeling-invariant encoding: the minimal upper-triangle bit string.

    Bits run column by column over the upper triangle, (0,1), (0,2), (1,2), (0,3), ...,
    which is also the graph6 bit order.
    """

    n: int
    bits: str

    def to_graph(self) -> Graph:
        rows = [0] * self.n
        for (u, v), bit in zip(_column_pairs(self.n), self.bits):
            if bit == "1":
                rows[u] |= 1 << v
                rows[v] |= 1 << u
        return Graph(self.n, tuple(rows))


class GraphKind(str, Enum):
    """Named graph families."""

    PATH = "path"
    CYCLE = "cycle"
    STAR = "star"
    COMPLETE = "complete"
    COMPLETE_BIPARTITE = "complete_bipartite"
    EMPTY = "empty"


def _bits(row: int) -> Iterator[int]:
    while row:
        low = row & -row
        yield low.bit_length() - 1
        row ^= low


def _check_pair(n: int, u: int, v: int):
    if not (0 <= u < n and 0 <= v < n):
        raise InvalidParameterError(f"vertex pair ({u}, {v}) out of range for n={n}")
    if u == v:
        raise InvalidParameterError(f"loops are not allowed (vertex {u})")


def _column_pairs(n: int) -> List[Tuple[int, int]]:
    return [(i, j) for j in range(1, n) for i in range(j)]


def edge_pairs(n: int) -> List[Tuple[int, int]]:
    """Vertex pairs in the order used by edge masks (lexicographic, u < v)."""
    return list(combinations(range(n), 2))


def from_mask(n: int, mask: int) -> Graph:
    """Decode an edge mask: bit k is the k-th pair of `edge_pairs(n)`."""
    rows = [0] * n
    for k, (u, v) in enumerate(edge_pairs(n)):
        if (mask >> k) & 1:
            rows[u] |= 1 << v
            rows[v] |= 1 << u
    return Graph(n, tuple(rows))


def to_mask(g: Graph) -> int:
    mask = 0
    for k, (u, v) in enumerate(edge_pairs(g.n)):
        if g.has_edge(u, v):
            mask |= 1 << k
    return mask


def complete_split(n: int, omega: int) -> Graph:
    """CS_{n,omega}: clique on 0..omega-1 joined to an independent set on the rest."""
    if n > MAX_ORDER:
        raise InvalidParameterError(f"vertex count must be at most {MAX_ORDER}, got {n}")
    if not 1 <= omega <= n:
        raise InvalidParameterError(f"clique size must be in [1, n], got omega={omega}, n={n}")
    edges = [(u, v) for u, v in combinations(range(n), 2) if u < omega]
    return Graph.from_edges(n, edges)


def pendant_clique(n: int) -> Graph:
    """K_{n-1}^+: a clique on 0..n-2 plus vertex n-1 hanging off vertex 0."""
    if not 3 <= n <= MAX_ORDER:
        raise InvalidParameterError(f"pendant clique needs 3 <= n <= {MAX_ORDER}, got {n}")
    edges = list(combinations(range(n - 1), 2)) + [(0, n - 1)]
    return Graph.from_edges(n, edges)


def named_graph(kind: GraphKind, n: int, extra: Optional[int] = None) -> Graph:
    """Standard member of a named family on n vertices."""
    kind = GraphKind(kind)
    if n < 1:
        raise InvalidParameterError(f"vertex count must be positive, got {n}")
    if kind == GraphKind.PATH:
        return Graph.from_edges(n, [(v, v + 1) for v in range(n - 1)])
    if kind == GraphKind.CYCLE:
        if n < 3:
            raise InvalidParameterError(f"a cycle needs at least 3 vertices, got {n}")
        return Graph.from_edges(n, [(v, (v + 1) % n) for v in range(n)])
    if kind == GraphKind.STAR:
        return Graph.from_edges(n, [(0, v) for v in range(1, n)])
    if kind == GraphKind.COMPLETE:
        return Graph.from_edges(n, combinations(range(n), 2))
    if kind == GraphKind.COMPLETE_BIPARTITE:
        if extra is None or not 1 <= extra <= n - 1:
            raise InvalidParameterError(f"complete_bipartite needs a part size in [1, n-1], got {extra}")
        return Graph.from_edges(n, [(u, v) for u in range(extra) for v in range(extra, n)])
    return Graph.empty(n)


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph(g.n, tuple(full & ~row & ~(1 << u) for u, row in enumerate(g.rows)))


def toggle_edge(g: Graph, u: int, v: int) -> Graph:
    """Flip the (u, v) entry: add the edge if absent, remove it if present."""
    _check_pair(g.n, u, v)
    rows = list(g.rows)
    rows[u] ^= 1 << v
    rows[v] ^= 1 << u
    return Graph(g.n, tuple(rows))


def clone_neighbourhood(g: Graph, u: int, v: int) -> Graph:
    """Drop every edge at u, then join u to N(v) minus u itself."""
    _check_pair(g.n, u, v)
    rows = list(g.rows)
    for w in _bits(rows[u]):
        rows[w] &= ~(1 << u)
    rows[u] = g.rows[v] & ~(1 << u)
    for w in _bits(rows[u]):
        rows[w] |= 1 << u
    return Graph(g.n, tuple(rows))


def permute(g: Graph, perm: Sequence[int]) -> Graph:
    """Relabel: vertex v of g becomes vertex perm[v]."""
    if sorted(perm) != list(range(g.n)):
        raise InvalidParameterError("perm must be a permutation of 0..n-1")
    return Graph.from_edges(g.n, [(perm[u], perm[v]) for u, v in g.edges()])


def disjoint_union(first: Graph, second: Graph) -> Graph:
    shift = first.n
    edges = first.edges() + [(u + shift, v + shift) for u, v in second.edges()]
    return Graph.from_edges(first.n + second.n, edges)


def random_graph(n: int, p: float = 0.5, seed: Union[None, int, Sequence[int]] = None) -> Graph:
    """Erdos-Renyi G(n, p) drawn from a seeded numpy generator."""
    if not 0.0 <= p <= 1.0:
        raise InvalidParameterError(f"edge probability must be in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    pairs = edge_pairs(n)
    draws = rng.random(len(pairs)) < p
    return Graph.from_edges(n, [pair for pair, keep in zip(pairs, draws) if keep])


def is_connected(g: Graph) -> bool:
    """Traversal from vertex 0; a single vertex is connected."""
    reached = 1
    frontier = 1
    while frontier:
        nxt = 0
        for v in _bits(frontier):
            nxt |= g.rows[v]
        frontier = nxt & ~reached
        reached |= frontier
    return reached == (1 << g.n) - 1


def canonical_form(g: Graph) -> CanonicalForm:
    """Minimal column-order bit string over all relabelings.

    Positions are filled in ascending-degree order, so only relabelings that sort the
    degree sequence are scanned; a branch is cut as soon as its prefix exceeds the best.
    """
    n = g.n
    if n > CANONICAL_MAX_ORDER:
        raise SizeLimitError(
            f"canonical_form scans n! relabelings and accepts n <= {CANONICAL_MAX_ORDER}, got {n}",
            limit=CANONICAL_MAX_ORDER,
        )
    degrees = g.degrees()
    target = sorted(degrees)
    best: Optional[Tuple[int, ...]] = None
    placed: List[int] = []
    prefix: List[int] = []

    def extend(k: int):
        nonlocal best
        if k == n:
            candidate = tuple(prefix)
            if best is None or candidate < best:
                best = candidate
            return
        used = set(placed)
        for v in range(n):
            if v in used or degrees[v] != target[k]:
                continue
            column = [int(g.has_edge(w, v)) for w in placed]
            prefix.extend(column)
            if best is None or tuple(prefix) <= best[: len(prefix)]:
                placed.append(v)
                extend(k + 1)
                placed.pop()
            del prefix[len(prefix) - k :]

    extend(0)
    return CanonicalForm(n, "".join(str(bit) for bit in best or ()))

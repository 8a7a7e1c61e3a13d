"""Clique complexes built from simple undirected graphs.

Vertices are labelled 1..n. Every simplex is stored as a strictly increasing
tuple of vertex ids, and each dimension keeps its simplices in lexicographic
order so that positions double as row/column indices of boundary matrices.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from itertools import combinations

DEFAULT_K_MAX = 3

Simplex = tuple[int, ...]


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"vertex count must be non-negative, got {self.n}")
        for a, b in self.edges:
            if not (1 <= a < b <= self.n):
                raise ValueError(f"invalid edge ({a}, {b}) for n={self.n}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> Graph:
        normalized = set()
        for e in edges:
            if len(e) != 2:
                raise ValueError(f"edge must have two endpoints: {e!r}")
            a, b = int(e[0]), int(e[1])
            if a == b:
                raise ValueError(f"self-loop at vertex {a}")
            pair = (min(a, b), max(a, b))
            if pair in normalized:
                raise ValueError(f"duplicate edge {pair}")
            normalized.add(pair)
        return cls(n, frozenset(normalized))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def adjacent(self, a: int, b: int) -> bool:
        if a > b:
            a, b = b, a
        return (a, b) in self.edges

    def neighbors(self) -> dict[int, frozenset[int]]:
        nb: dict[int, set[int]] = {v: set() for v in range(1, self.n + 1)}
        for a, b in self.edges:
            nb[a].add(b)
            nb[b].add(a)
        return {v: frozenset(s) for v, s in nb.items()}


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(1, n + 1), 2))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i % n + 1) for i in range(1, n + 1)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)])


def random_graph(n: int, p: float, rng) -> Graph:
    """Erdos-Renyi G(n, p) sample drawn from a numpy Generator."""
    edges = [e for e in combinations(range(1, n + 1), 2) if rng.random() < p]
    return Graph.from_edges(n, edges)


def is_member(vertices: Sequence[int], g: Graph) -> bool:
    """True iff ``vertices`` is strictly increasing, within 1..n and a clique of ``g``."""
    try:
        vs = [int(v) for v in vertices]
    except (TypeError, ValueError):
        return False
    if not vs:
        return False
    prev = 0
    for v in vs:
        if v <= prev or v > g.n:
            return False
        prev = v
    return all(g.adjacent(a, b) for a, b in combinations(vs, 2))


@dataclass(frozen=True)
class CliqueComplex:
    graph: Graph
    k_max: int
    simplices_by_dim: tuple[tuple[Simplex, ...], ...]
    _index: tuple[dict, ...] = field(repr=False, compare=False, default=())

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def n_k(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.simplices_by_dim)

    def simplices(self, k: int) -> tuple[Simplex, ...]:
        self._require(k)
        return self.simplices_by_dim[k]

    def count(self, k: int) -> int:
        return len(self.simplices(k))

    def index(self, k: int) -> dict:
        self._require(k)
        return self._index[k]

    def has_dim(self, k: int) -> bool:
        return 0 <= k <= self.k_max

    def _require(self, k: int):
        if not self.has_dim(k):
            raise ValueError(f"dimension {k} not enumerated (k_max={self.k_max})")


def build_clique_complex(g: Graph, k_max: int = DEFAULT_K_MAX) -> CliqueComplex:
    """Enumerate all cliques with at most ``k_max + 1`` vertices.

    Each k-clique is extended only by neighbours larger than its last vertex,
    which yields every clique exactly once and in lexicographic order.
    """
    if k_max < 0:
        raise ValueError(f"k_max must be >= 0, got {k_max}")
    nb = g.neighbors()
    levels: list[list[Simplex]] = [[(v,) for v in range(1, g.n + 1)]]
    for _ in range(k_max):
        nxt = []
        for s in levels[-1]:
            common = set(nb[s[0]])
            for v in s[1:]:
                common &= nb[v]
            for w in sorted(c for c in common if c > s[-1]):
                nxt.append(s + (w,))
        nxt.sort()
        levels.append(nxt)
    by_dim = tuple(tuple(level) for level in levels)
    index = tuple({s: i for i, s in enumerate(level)} for level in by_dim)
    return CliqueComplex(g, k_max, by_dim, index)

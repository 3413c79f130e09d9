"""
Undirected conditional independence graphs on vertices 0..d-1.

Vertices are plain integers; variable names live with the data. Edges are
stored as sorted (a, b) pairs with a < b, so {a,b} and {b,a} are the same
edge. Graphs are enumerated in bitmask order over the lexicographically sorted
vertex pairs, which also fixes report ordering.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

import networkx as nx

from gimodels.errors import ArgumentError, EnumerationCapError

DEFAULT_ENUMERATION_CAP = 6


def vertex_pairs(d: int) -> list[tuple[int, int]]:
    """All unordered pairs (a, b), a < b, in lexicographic order."""
    return list(combinations(range(d), 2))


@dataclass(frozen=True)
class UndirectedGraph:
    d: int
    edges: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self) -> None:
        if int(self.d) != self.d or self.d < 1:
            raise ArgumentError(f"Vertex count must be an integer >= 1, got {self.d}")
        normalized = set()
        for edge in self.edges:
            a, b = (int(v) for v in edge)
            if a == b:
                raise ArgumentError(f"Self-loop {{{a},{b}}} is not allowed")
            if not (0 <= a < self.d and 0 <= b < self.d):
                raise ArgumentError(f"Edge {{{a},{b}}} out of range for d={self.d}")
            normalized.add((min(a, b), max(a, b)))
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def complete(cls, d: int) -> "UndirectedGraph":
        return cls(d, frozenset(vertex_pairs(d)))

    @classmethod
    def empty(cls, d: int) -> "UndirectedGraph":
        return cls(d)

    @classmethod
    def from_edges(cls, d: int, edges: Iterable[Iterable[int]]) -> "UndirectedGraph":
        return cls(d, frozenset(tuple(e) for e in edges))

    @classmethod
    def from_bitmask(cls, d: int, mask: int) -> "UndirectedGraph":
        pairs = vertex_pairs(d)
        if mask < 0 or mask >= 2 ** len(pairs):
            raise ArgumentError(f"Bitmask {mask} out of range for d={d}")
        return cls(d, frozenset(p for i, p in enumerate(pairs) if mask >> i & 1))

    @property
    def bitmask(self) -> int:
        return sum(1 << i for i, p in enumerate(vertex_pairs(self.d)) if p in self.edges)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def adjacent(self, a: int, b: int) -> bool:
        """True for a == b or an edge {a,b}: the pair carries free parameters."""
        return a == b or self.has_edge(a, b)

    def missing_edges(self) -> list[tuple[int, int]]:
        return [p for p in vertex_pairs(self.d) if p not in self.edges]

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def to_networkx(self) -> nx.Graph:
        H = nx.Graph()
        H.add_nodes_from(range(self.d))
        H.add_edges_from(self.sorted_edges())
        return H

    def to_dict(self) -> dict:
        return {"d": self.d, "edges": [list(e) for e in self.sorted_edges()]}

    @classmethod
    def from_dict(cls, obj: dict) -> "UndirectedGraph":
        try:
            return cls.from_edges(int(obj["d"]), obj.get("edges", []))
        except (KeyError, TypeError) as exc:
            raise ArgumentError(f"Malformed graph JSON: {exc}") from exc

    def __str__(self) -> str:
        body = ",".join(f"{a}-{b}" for a, b in self.sorted_edges())
        return f"G(d={self.d};{body or 'empty'})"


@dataclass(frozen=True)
class ModelSpec:
    """Order p and conditional independence graph of a GI(p,G) model."""

    p: int
    graph: UndirectedGraph

    def __post_init__(self) -> None:
        if int(self.p) != self.p or self.p < 0:
            raise ArgumentError(f"Model order must be an integer >= 0, got {self.p}")
        object.__setattr__(self, "p", int(self.p))

    @property
    def d(self) -> int:
        return self.graph.d

    def to_dict(self) -> dict:
        return {"p": self.p, "graph": self.graph.to_dict()}

    @classmethod
    def from_dict(cls, obj: dict) -> "ModelSpec":
        return cls(p=int(obj["p"]), graph=UndirectedGraph.from_dict(obj["graph"]))


def _check_vertex_set(name: str, vertices: Iterable[int], d: int) -> frozenset[int]:
    out = frozenset(int(v) for v in vertices)
    bad = [v for v in out if not 0 <= v < d]
    if bad:
        raise ArgumentError(f"Vertex set {name} has out-of-range vertices {sorted(bad)}")
    return out


def separates(
    G: UndirectedGraph,
    A: Iterable[int],
    B: Iterable[int],
    S: Iterable[int] = (),
) -> bool:
    """
    True iff S separates A from B in G, i.e. every path from A to B meets S.

    Computed on the networkx view of G with S removed: no vertex of B may lie
    in a connected component that contains a vertex of A.
    """
    A = _check_vertex_set("A", A, G.d)
    B = _check_vertex_set("B", B, G.d)
    S = _check_vertex_set("S", S, G.d)
    if not A or not B:
        raise ArgumentError("Vertex sets A and B must be nonempty")
    if A & B or A & S or B & S:
        raise ArgumentError("Vertex sets A, B and S must be pairwise disjoint")

    H = G.to_networkx()
    H.remove_nodes_from(S)
    reachable = set().union(*(nx.node_connected_component(H, a) for a in A))
    return not reachable & B


def iter_graphs(d: int) -> Iterator[UndirectedGraph]:
    n_pairs = d * (d - 1) // 2
    for mask in range(2**n_pairs):
        yield UndirectedGraph.from_bitmask(d, mask)


def enumerate_graphs(d: int, cap: int = DEFAULT_ENUMERATION_CAP) -> list[UndirectedGraph]:
    """All 2^{d(d-1)/2} graphs on d vertices in bitmask order."""
    if d < 1:
        raise ArgumentError(f"Vertex count must be >= 1, got {d}")
    if d > cap:
        raise EnumerationCapError(d, cap)
    return list(iter_graphs(d))

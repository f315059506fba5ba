# app/core/network.py

from dataclasses import dataclass, field
from typing import Iterator

import networkx as nx
import numpy as np

from app.errors import ConfigurationError


@dataclass(frozen=True)
class Network:
    """
    Radio network over dense node ids 0..n-1.

    `adjacency[v]` holds the out-neighbors of v (for undirected networks
    these are simply its neighbors). `plan` is set by generators whose
    round-robin protocol is part of the construction: plan[t-1] lists the
    nodes that broadcast in round t.
    """

    adjacency: tuple[frozenset[int], ...]
    directed: bool = False
    name: str = "custom"
    plan: tuple[tuple[int, ...], ...] | None = None
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.adjacency)
        if n < 1:
            raise ConfigurationError("network needs at least one node")

        for v, nbrs in enumerate(self.adjacency):
            if v in nbrs:
                raise ConfigurationError(f"self-loop at node {v}")
            for w in nbrs:
                if not 0 <= w < n:
                    raise ConfigurationError(f"edge {v}->{w} leaves [0, {n})")
                if not self.directed and v not in self.adjacency[w]:
                    raise ConfigurationError(f"undirected edge {v}-{w} is not symmetric")

    # --------------------------------------------------
    # CONSTRUCTION
    # --------------------------------------------------
    @classmethod
    def from_edges(cls, n: int, edges, directed: bool = False, **kwargs) -> "Network":
        adjacency = [set() for _ in range(n)]
        for u, w in edges:
            if not (0 <= u < n and 0 <= w < n):
                raise ConfigurationError(f"edge {u}-{w} leaves [0, {n})")
            adjacency[u].add(w)
            if not directed:
                adjacency[w].add(u)
        return cls(tuple(frozenset(a) for a in adjacency), directed=directed, **kwargs)

    @classmethod
    def from_networkx(cls, graph: nx.Graph, **kwargs) -> "Network":
        graph = nx.convert_node_labels_to_integers(graph, ordering="sorted")
        return cls.from_edges(
            graph.number_of_nodes(), graph.edges(), directed=graph.is_directed(), **kwargs
        )

    # --------------------------------------------------
    # BASIC PROPERTIES
    # --------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.adjacency)

    @property
    def nodes(self) -> range:
        return range(self.n)

    @property
    def max_degree(self) -> int:
        """Largest out-degree, reported as at least 1."""
        return max(1, max(len(a) for a in self.adjacency))

    def neighbors(self, v: int) -> frozenset[int]:
        return self.adjacency[v]

    def in_neighbors(self, v: int) -> frozenset[int]:
        if not self.directed:
            return self.adjacency[v]
        if "in" not in self._cache:
            incoming = [set() for _ in self.nodes]
            for u, w in self.arcs():
                incoming[w].add(u)
            self._cache["in"] = tuple(frozenset(s) for s in incoming)
        return self._cache["in"][v]

    def arcs(self) -> Iterator[tuple[int, int]]:
        for u, nbrs in enumerate(self.adjacency):
            for w in sorted(nbrs):
                yield u, w

    def edges(self) -> list[tuple[int, int]]:
        """Arcs for directed networks, u < w pairs otherwise."""
        if self.directed:
            return list(self.arcs())
        return [(u, w) for u, w in self.arcs() if u < w]

    # --------------------------------------------------
    # DERIVED VIEWS (CACHED)
    # --------------------------------------------------
    def adjacency_matrix(self) -> np.ndarray:
        """Float matrix A with A[u, w] = 1 iff u -> w."""
        if "matrix" not in self._cache:
            matrix = np.zeros((self.n, self.n), dtype=np.float64)
            for u, w in self.arcs():
                matrix[u, w] = 1.0
            self._cache["matrix"] = matrix
        return self._cache["matrix"]

    def to_networkx(self) -> nx.Graph:
        if "nx" not in self._cache:
            graph = nx.DiGraph() if self.directed else nx.Graph()
            graph.add_nodes_from(self.nodes)
            graph.add_edges_from(self.arcs())
            self._cache["nx"] = graph
        return self._cache["nx"]

    def ball(self, v: int, k: int) -> frozenset[int]:
        """Γ^(k)(v): every node within k hops of v, v included."""
        key = ("ball", k)
        if key not in self._cache:
            graph = self.to_networkx()
            self._cache[key] = tuple(
                frozenset(nx.single_source_shortest_path_length(graph, u, cutoff=k))
                for u in self.nodes
            )
        return self._cache[key][v]

    def closed_neighborhood(self, v: int) -> frozenset[int]:
        return self.ball(v, 1)

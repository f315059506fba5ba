# app/core/graphs.py

import logging

import networkx as nx
import numpy as np

from app.core.network import Network
from app.errors import ParameterError

logger = logging.getLogger(__name__)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ParameterError(message)


def star(delta: int) -> Network:
    """Center 0, leaves 1..Δ."""
    _require(delta >= 1, f"star needs Δ ≥ 1, got {delta}")
    return Network.from_networkx(nx.star_graph(delta), name=f"star:{delta}")


def path(n: int) -> Network:
    _require(n >= 1, f"path needs n ≥ 1, got {n}")
    return Network.from_networkx(nx.path_graph(n), name=f"path:{n}")


def cycle(n: int) -> Network:
    _require(n >= 3, f"cycle needs n ≥ 3, got {n}")
    return Network.from_networkx(nx.cycle_graph(n), name=f"cycle:{n}")


def random_bounded(n: int, delta: int, seed: int) -> Network:
    """
    Random graph with maximum degree ≤ Δ: a random spanning tree of
    bounded degree (every node attaches to an earlier node with spare
    capacity), then random extra edges between nodes with spare degree.
    Always connected when Δ ≥ 2 or n ≤ 2.
    """
    _require(n >= 1 and delta >= 1, f"random_bounded needs n ≥ 1 and Δ ≥ 1, got n={n}, Δ={delta}")
    _require(delta >= 2 or n <= 2, f"a connected graph on {n} nodes needs Δ ≥ 2")

    rng = np.random.default_rng(seed)
    degree = np.zeros(n, dtype=int)
    edges: set[tuple[int, int]] = set()

    order = rng.permutation(n)
    for i in range(1, n):
        v = int(order[i])
        candidates = [int(u) for u in order[:i] if degree[u] < delta]
        u = candidates[int(rng.integers(len(candidates)))]
        edges.add((min(u, v), max(u, v)))
        degree[u] += 1
        degree[v] += 1

    # extra edges: roughly as many again as the tree has
    for _ in range(4 * n):
        if len(edges) >= n * delta // 2:
            break
        u, v = (int(x) for x in rng.integers(n, size=2))
        key = (min(u, v), max(u, v))
        if u == v or key in edges or degree[u] >= delta or degree[v] >= delta:
            continue
        if rng.random() < 0.5:
            edges.add(key)
            degree[u] += 1
            degree[v] += 1

    return Network.from_edges(n, edges, name=f"random_bounded:{n}:{delta}:{seed}")


def bipartite_hard(n: int, delta: int, seed: int) -> Network:
    """
    Left nodes 0..n-1, right nodes n..2n-1. Iteration t = 1..Δ draws a fresh
    permutation of the right side, cuts it into Δ blocks of n/Δ and joins
    left node l_t^i = (i-1)·(n/Δ) + (t-1) to every node of block i. Round t
    of the attached plan is broadcast by l_t^1..l_t^Δ.
    """
    _require(delta >= 1 and n >= 1, f"bipartite_hard needs n, Δ ≥ 1, got n={n}, Δ={delta}")
    _require(n % delta == 0, f"Δ={delta} must divide n={n}")
    block = n // delta
    _require(block >= delta, f"bipartite_hard needs Δ² ≤ n, got n={n}, Δ={delta}")

    rng = np.random.default_rng(seed)
    edges = []
    plan = []
    for t in range(1, delta + 1):
        perm = rng.permutation(n) + n
        senders = []
        for i in range(1, delta + 1):
            left = (i - 1) * block + (t - 1)
            senders.append(left)
            edges.extend((left, int(r)) for r in perm[(i - 1) * block:i * block])
        plan.append(tuple(senders))

    return Network.from_edges(
        2 * n, edges, name=f"bipartite_hard:{n}:{delta}:{seed}", plan=tuple(plan)
    )


def directed_bipartite(delta: int) -> Network:
    """Complete bipartite L -> R with |L| = |R| = Δ; l_i broadcasts in round i."""
    _require(delta >= 1, f"directed_bipartite needs Δ ≥ 1, got {delta}")
    graph = nx.complete_multipartite_graph(delta, delta)
    arcs = sorted((min(u, w), max(u, w)) for u, w in graph.edges())
    return Network.from_edges(
        2 * delta,
        arcs,
        directed=True,
        name=f"directed_bipartite:{delta}",
        plan=tuple((i,) for i in range(delta)),
    )


GENERATORS = {
    "star": star,
    "path": path,
    "cycle": cycle,
    "random_bounded": random_bounded,
    "bipartite_hard": bipartite_hard,
    "directed_bipartite": directed_bipartite,
}


def make_graph(spec) -> Network:
    """Builds the network a GraphSpec describes."""
    if spec.kind == "file":
        from app.repositories.graph_repo import read_edge_list

        return read_edge_list(spec.path)

    generator = GENERATORS.get(spec.kind)
    if generator is None:
        raise ParameterError(f"unknown graph kind {spec.kind!r}")

    if spec.kind == "star" or spec.kind == "directed_bipartite":
        _require(spec.delta is not None, f"{spec.kind} needs Δ")
        network = generator(spec.delta)
    elif spec.kind in ("path", "cycle"):
        _require(spec.n is not None, f"{spec.kind} needs n")
        network = generator(spec.n)
    else:
        _require(spec.n is not None and spec.delta is not None, f"{spec.kind} needs n and Δ")
        network = generator(spec.n, spec.delta, spec.seed or 0)

    logger.debug("built %s: n=%d Δ=%d", network.name, network.n, network.max_degree)
    return network

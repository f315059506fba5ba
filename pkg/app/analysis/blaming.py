# app/analysis/blaming.py

import logging
from dataclasses import dataclass, field

import numpy as np

from app.core.network import Network
from app.errors import IncompleteHistoryError
from app.simulators.progress import CompletionTable, ServiceBounds

logger = logging.getLogger(__name__)


@dataclass
class BlamingReport:
    """
    increments[v, x] = D[v, x] - max_{w∈Γ²(v)} D[w, x-1] and the node that
    attains the max. chains[v] is the backward trace from (v, T+1) to level 1.
    """

    increments: np.ndarray
    blamed: np.ndarray
    chains: dict[int, list[tuple[int, int]]]
    longest: int
    max_increment: int
    violations: list[tuple[int, int]] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.violations


def measure_blaming_chains(
    table: CompletionTable,
    network: Network,
    service: ServiceBounds | None = None,
) -> BlamingReport:
    """
    Traces blaming chains through a completed D table. With `service`,
    also re-checks D[v, x] ≤ max over Γ^h(v) of D[·, x-1] plus the
    realised service delay, h being 2 (3 for broadcast levels).
    """
    if not table.complete:
        raise IncompleteHistoryError("completion table has unreached levels")

    d, length = table.table, table.length
    n = network.n
    increments = np.zeros((n, length + 2), dtype=np.int64)
    blamed = np.full((n, length + 2), -1, dtype=np.int64)
    balls = [sorted(network.ball(v, 2)) for v in network.nodes]

    for x in range(2, length + 2):
        for v in range(n):
            previous = d[balls[v], x - 1]
            k = int(np.argmax(previous))
            blamed[v, x] = balls[v][k]
            increments[v, x] = d[v, x] - previous[k]

    chains: dict[int, list[tuple[int, int]]] = {}
    for v in range(n):
        node, chain = v, []
        for x in range(length + 1, 0, -1):
            chain.append((node, x))
            if x > 1:
                node = int(blamed[node, x])
        chains[v] = chain

    violations: list[tuple[int, int]] = []
    if service is not None:
        for v in range(n):
            for x in range(2, length + 2):
                horizon = max(d[w, x - 1] for w in network.ball(v, int(service.hops[v, x])))
                if d[v, x] > horizon + service.delay[v, x]:
                    violations.append((v, x))
        if violations:
            logger.warning("recurrence fails at %d (node, level) pairs", len(violations))

    return BlamingReport(
        increments=increments,
        blamed=blamed,
        chains=chains,
        longest=int(d[:, length + 1].max()),
        max_increment=int(increments[:, 2:].max()) if length else 0,
        violations=violations,
    )

# app/simulators/progress.py

import logging
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from app.config import DEFAULT_CONSTANTS, SimulationConstants
from app.core.engine import Channel, Transcript, run
from app.core.network import Network
from app.core.noise import NoiseModel
from app.simulators.common import (
    NodeActions,
    SimulationReport,
    first_true_row,
    require_undirected,
    resolve_inputs,
)
from app.utils import ceil_ln, clog2

logger = logging.getLogger(__name__)


class RoundKind(IntEnum):
    TRIVIAL = 0
    RECEIVE = 1
    BROADCAST = 2


# --------------------------------------------------
# FAULTLESS ROUND PLAN
# --------------------------------------------------
@dataclass
class RoundPlan:
    """
    What "successfully completed round x" means for every (v, x), read off
    the faultless run. Columns are indexed by round; column 0 is unused.
    """

    kind: np.ndarray
    sender: np.ndarray
    receivers: list[dict[int, tuple[int, ...]]]

    @property
    def need(self) -> np.ndarray:
        need = np.zeros_like(self.sender)
        for v, by_round in enumerate(self.receivers):
            for x, ws in by_round.items():
                need[v, x] = len(ws)
        return need

    @classmethod
    def from_transcript(cls, network: Network, transcript: Transcript, length: int) -> "RoundPlan":
        n = network.n
        kind = np.full((n, length + 2), RoundKind.TRIVIAL, dtype=np.int8)
        sender = np.full((n, length + 2), -1, dtype=np.int64)
        receivers: list[dict[int, list[int]]] = [dict() for _ in range(n)]

        for x in range(1, length + 1):
            actions = transcript.actions[x - 1]
            for v in range(n):
                if actions[v].is_broadcast:
                    continue
                senders = [u for u in network.in_neighbors(v) if actions[u].is_broadcast]
                if len(senders) == 1:
                    s = senders[0]
                    kind[v, x] = RoundKind.RECEIVE
                    sender[v, x] = s
                    receivers[s].setdefault(x, []).append(v)

        for s, by_round in enumerate(receivers):
            for x in by_round:
                kind[s, x] = RoundKind.BROADCAST

        frozen = [{x: tuple(ws) for x, ws in by_round.items()} for by_round in receivers]
        return cls(kind=kind, sender=sender, receivers=frozen)


@dataclass
class CompletionTable:
    """D[v, x] = first physical round with t_v ≥ x, for x = 1..T+1; -1 if never."""

    table: np.ndarray
    length: int

    @property
    def complete(self) -> bool:
        return bool((self.table[:, 1:self.length + 2] >= 0).all())


def default_round_budget(network: Network, length: int, constants: SimulationConstants) -> int:
    return constants.budget_factor * (length * clog2(network.max_degree) + ceil_ln(network.n))


def _closed_neighborhood_index(network: Network) -> tuple[np.ndarray, np.ndarray]:
    flat, offsets = [], []
    for v in network.nodes:
        offsets.append(len(flat))
        flat.extend(sorted(network.ball(v, 1)))
    return np.asarray(flat, dtype=np.int64), np.asarray(offsets, dtype=np.int64)


# --------------------------------------------------
# SIMULATOR
# --------------------------------------------------
def simulate_with_progress_detection(
    protocol,
    network: Network,
    noise: NoiseModel,
    inputs=None,
    round_budget: int | None = None,
    constants: SimulationConstants = DEFAULT_CONSTANTS,
) -> SimulationReport:
    """
    Every node performs P(v, t_u) where u minimises (t_u, u) over Γ(v)
    including v; the oracle then moves each t_v past its round if v
    completed it. Frames carry (round, sender, payload).
    """
    require_undirected(network, "sim_progress")
    inputs = resolve_inputs(protocol, network, noise, inputs)
    n, length = network.n, protocol.length

    faultless = run(network, protocol, inputs, noise.faultless(), length, constants.payload_cap)
    plan = RoundPlan.from_transcript(network, faultless, length)
    need = plan.need

    budget = round_budget or default_round_budget(network, length, constants)
    flat, offsets = _closed_neighborhood_index(network)

    t = np.ones(n, dtype=np.int64)
    table = np.full((n, length + 2), -1, dtype=np.int64)
    table[:, 1] = 0
    delivered = np.zeros((n, length + 2), dtype=bool)
    acknowledged = np.zeros((n, length + 2), dtype=np.int64)
    histories: list[list] = [[] for _ in range(n)]
    actions = NodeActions(protocol, inputs, histories, constants.payload_cap)
    channel = Channel(network, noise)
    nodes = np.arange(n)

    while channel.round < budget and t.min() <= length:
        performed = np.minimum.reduceat(t[flat], offsets)
        frames = []
        for v in range(n):
            x = int(performed[v])
            action = actions(v, x)
            frames.append((x, v, action.payload) if action.is_broadcast else None)

        for v, frame in enumerate(channel.transmit(frames)):
            if frame is None:
                continue
            x, s, payload = frame
            if x == t[v] and plan.sender[v, x] == s and not delivered[v, x]:
                delivered[v, x] = True
                acknowledged[s, x] += 1
                histories[v].append((x, payload))

        xs = np.minimum(t, length)
        kind = plan.kind[nodes, xs]
        done = (
            (kind == RoundKind.TRIVIAL)
            | ((kind == RoundKind.RECEIVE) & delivered[nodes, xs])
            | ((kind == RoundKind.BROADCAST) & (acknowledged[nodes, xs] == need[nodes, xs]))
        ) & (t <= length)
        t[done] += 1
        table[nodes[done], t[done]] = channel.round

    completed = [bool(tv > length) for tv in t]
    if not all(completed):
        logger.warning(
            "sim_progress on %s: budget of %d rounds exhausted with %d nodes behind",
            network.name, budget, completed.count(False),
        )

    return SimulationReport(
        simulator="progress",
        histories=histories,
        rounds=channel.round,
        scheduled_rounds=budget,
        completed=completed,
        completion_rounds=[int(table[v, length + 1]) if completed[v] else None for v in range(n)],
        extras={
            "completion_table": CompletionTable(table, length),
            "plan": plan,
            "faultless": faultless,
            "virtual_rounds": t.tolist(),
        },
    )


# --------------------------------------------------
# SERVICE BOUNDS
# --------------------------------------------------
@dataclass
class ServiceBounds:
    """
    delay[v, x]: rounds after the horizon max_{w∈Γ^hops(v)} D[w, x-1] by
    which v must complete round x-1, given the faults actually drawn.
    """

    delay: np.ndarray
    hops: np.ndarray


def _first_clear_offset(channel: Channel, after: int, nodes: list[int], chunk: int = 64) -> int:
    """Rounds after `after` until every node in `nodes` saw a non-faulty round."""
    pending = np.asarray(nodes, dtype=np.int64)
    offset = 0
    worst = 0
    while pending.size:
        clear = ~channel.faults(after + offset + 1, chunk)[:, pending]
        first = first_true_row(clear)
        hit = first >= 0
        if hit.any():
            worst = max(worst, offset + int(first[hit].max()) + 1)
        pending = pending[~hit]
        offset += chunk
    return worst


def service_bounds(report: SimulationReport, network: Network, noise: NoiseModel) -> ServiceBounds:
    table: CompletionTable = report.extras["completion_table"]
    plan: RoundPlan = report.extras["plan"]
    d, length = table.table, table.length
    n = network.n
    channel = Channel(network, noise)

    delay = np.ones((n, length + 2), dtype=np.int64)
    hops = np.full((n, length + 2), 2, dtype=np.int64)
    for v in range(n):
        for x in range(2, length + 2):
            r = x - 1
            kind = plan.kind[v, r]
            if kind == RoundKind.BROADCAST:
                hops[v, x] = 3
                listeners = list(plan.receivers[v][r])
            elif kind == RoundKind.RECEIVE:
                listeners = [v]
            else:
                continue
            horizon = int(max(d[w, r] for w in network.ball(v, int(hops[v, x]))))
            if horizon < 0:
                continue
            delay[v, x] = _first_clear_offset(channel, horizon, listeners)
    return ServiceBounds(delay=delay, hops=hops)

# app/simulators/repetition.py

import logging

import numpy as np

from app.config import DEFAULT_CONSTANTS, SimulationConstants
from app.core.engine import Channel
from app.core.network import Network
from app.core.noise import NoiseModel
from app.simulators.common import (
    NodeActions,
    SimulationReport,
    first_true_row,
    require_undirected,
    resolve_inputs,
)
from app.utils import ceil_ln

logger = logging.getLogger(__name__)


def repetition_factor(network: Network, constants: SimulationConstants) -> int:
    return constants.c_rep * max(1, ceil_ln(network.n))


def simulate_by_repetition(
    protocol,
    network: Network,
    noise: NoiseModel,
    inputs=None,
    constants: SimulationConstants = DEFAULT_CONSTANTS,
) -> SimulationReport:
    """Each round of P is sent k = c_rep·⌈ln n⌉ times; listeners keep the first copy."""
    require_undirected(network, "sim_repeat")
    inputs = resolve_inputs(protocol, network, noise, inputs)
    n, length = network.n, protocol.length
    k = repetition_factor(network, constants)

    channel = Channel(network, noise)
    histories: list[list] = [[] for _ in range(n)]
    actions = NodeActions(protocol, inputs, histories, constants.payload_cap)
    missed = 0

    for x in range(1, length + 1):
        round_actions = [actions(v, x) for v in range(n)]
        sending = np.array([a.is_broadcast for a in round_actions], dtype=bool)
        received, senders = channel.deliver_block(np.tile(sending, (k, 1)), with_senders=True)
        first = first_true_row(received)
        for v in np.nonzero(first >= 0)[0]:
            s = int(senders[first[v], v])
            histories[v].append((x, round_actions[s].payload))

        counts = sending.astype(np.float64) @ network.adjacency_matrix()
        missed += int(((counts == 1) & ~sending & (first < 0)).sum())

    if missed:
        logger.debug("sim_repeat on %s: %d receipts lost in every repetition", network.name, missed)

    return SimulationReport(
        simulator="repeat",
        histories=histories,
        rounds=channel.round,
        scheduled_rounds=length * k,
        completed=[True] * n,
        completion_rounds=[channel.round] * n,
        extras={"repetitions": k, "lost_receipts": missed},
    )

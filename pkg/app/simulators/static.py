# app/simulators/static.py

import logging

import numpy as np

from app.config import DEFAULT_CONSTANTS, SimulationConstants
from app.core.engine import Channel
from app.core.network import Network
from app.core.noise import NoiseModel
from app.protocols.base import StaticProtocol
from app.protocols.schedule import as_static
from app.simulators.common import NodeActions, SimulationReport, require_undirected, resolve_inputs
from app.simulators.primitives import LearnDelaysTrace, PrimitiveKit, learn_delays
from app.utils import clog2, learn_delays_iterations, window_size

logger = logging.getLogger(__name__)


def static_lengths(network: Network, length: int, constants: SimulationConstants) -> dict[str, int]:
    window = window_size(network.n, constants.cQ)
    return {
        "window": window,
        "outer": length + window,
        "inner": constants.c1 * clog2(network.max_degree),
    }


def main_static(
    protocol,
    network: Network,
    noise: NoiseModel,
    inputs=None,
    constants: SimulationConstants = DEFAULT_CONSTANTS,
    oracle_mode: bool = False,
    trace_learn_delays: bool = False,
) -> SimulationReport:
    """
    Throttled simulation of a static protocol without progress detection.

    For L = 1..T+Q, repeated c1·⌈log₂Δ⌉ times: learn m_v by LearnDelays,
    perform P(v, m_v) when m_v ≤ t_v, and credit a receipt when the frame
    is tagged with the round v is waiting for. t_v = min(next pending
    round, L) throughout.
    """
    require_undirected(network, "sim_static")
    static: StaticProtocol = as_static(protocol, network, constants.payload_cap)
    inputs = resolve_inputs(static, network, noise, inputs)
    n, length = network.n, static.length
    lengths = static_lengths(network, length, constants)
    window, inner = lengths["window"], lengths["inner"]

    channel = Channel(network, noise)
    kit = PrimitiveKit(channel, constants, oracle=oracle_mode)
    cursors = [static.schedule.cursor(v) for v in network.nodes]
    histories: list[list] = [[] for _ in range(n)]
    actions = NodeActions(static, inputs, histories, constants.payload_cap)
    completion_rounds: list[int | None] = [0 if c.exhausted else None for c in cursors]
    traces: list[LearnDelaysTrace] = []

    def virtual_rounds(throttle: int) -> np.ndarray:
        return np.array([min(c.next_round, throttle) for c in cursors], dtype=np.int64)

    max_spread = 0
    window_violations = 0
    outer_done = 0
    for throttle in range(1, lengths["outer"] + 1):
        t = virtual_rounds(throttle)
        spread = int(t.max() - t.min())
        max_spread = max(max_spread, spread)
        if (t < throttle - window).any():
            window_violations += 1
            logger.warning(
                "sim_static on %s: L=%d, virtual rounds %d..%d leave the window of %d",
                network.name, throttle, int(t.min()), int(t.max()), window,
            )

        for _ in range(inner):
            t = virtual_rounds(throttle)
            trace = LearnDelaysTrace() if trace_learn_delays else None
            m = learn_delays(kit, t, throttle, window, trace)
            if trace is not None:
                traces.append(trace)

            frames = []
            for v in range(n):
                mv = int(m[v])
                action = actions(v, mv) if 1 <= mv <= min(int(t[v]), length) else None
                frames.append((mv, action.payload) if action is not None and action.is_broadcast else None)

            for v, frame in enumerate(channel.transmit(frames)):
                if frame is None:
                    continue
                tag, payload = frame
                cursor = cursors[v]
                if tag == m[v] == cursor.next_round and not cursor.exhausted:
                    cursor.fulfill(tag)
                    histories[v].append((tag, payload))
                    if cursor.exhausted:
                        completion_rounds[v] = channel.round

        outer_done = throttle
        if all(c.exhausted for c in cursors):
            break

    completed = [c.exhausted for c in cursors]
    if not all(completed):
        logger.warning(
            "sim_static on %s: %d nodes still behind after %d rounds",
            network.name, completed.count(False), channel.round,
        )

    per_attempt = 2 * kit.decay_rounds * learn_delays_iterations(window) + 1
    return SimulationReport(
        simulator="static",
        histories=histories,
        rounds=channel.round,
        scheduled_rounds=lengths["outer"] * inner * per_attempt,
        completed=completed,
        completion_rounds=completion_rounds,
        extras={
            "max_window_spread": max_spread,
            "window_violations": window_violations,
            "throttle_reached": outer_done,
            "window": window,
            "virtual_rounds": virtual_rounds(outer_done).tolist(),
            "learn_delays_traces": traces,
        },
    )

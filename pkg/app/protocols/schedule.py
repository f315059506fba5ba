# app/protocols/schedule.py

import logging

import numpy as np

from app.core.engine import run
from app.core.network import Network
from app.core.noise import NoiseModel
from app.errors import NotStaticError
from app.protocols.base import RadioProtocol, StaticProtocol, StaticSchedule

logger = logging.getLogger(__name__)


def derive_static_schedule(
    protocol: RadioProtocol,
    network: Network,
    trials: int = 2,
    seed: int = 0,
    payload_cap: int = 64,
) -> StaticSchedule:
    """
    Receive rounds of faultless runs under `trials` random input vectors.
    Differing rounds mean the protocol is not static. The check is a
    spot check, not a proof.
    """
    rng = np.random.default_rng(seed)
    schedules = []
    for _ in range(max(1, trials)):
        inputs = protocol.random_inputs(network, rng)
        transcript = run(network, protocol, inputs, NoiseModel(), protocol.length, payload_cap)
        schedules.append(tuple(tuple(transcript.receive_rounds(v)) for v in network.nodes))

    first = schedules[0]
    for other in schedules[1:]:
        if other != first:
            changed = [v for v in network.nodes if other[v] != first[v]]
            raise NotStaticError(f"{protocol.name}: receive rounds depend on inputs at nodes {changed[:5]}")

    logger.debug("derived schedule for %s on %s", protocol.name, network.name)
    return StaticSchedule(length=protocol.length, rounds=first)


def as_static(protocol: RadioProtocol, network: Network, payload_cap: int = 64) -> StaticProtocol:
    if isinstance(protocol, StaticProtocol):
        return protocol
    return StaticProtocol(protocol, derive_static_schedule(protocol, network, payload_cap=payload_cap))

# app/protocols/library.py

import logging

import numpy as np

from app.core.engine import LISTEN, History, NodeAction
from app.core.network import Network
from app.core.noise import PUBLIC_STREAM, RandomStream
from app.errors import ConfigurationError, ScheduleMismatchError
from app.protocols.base import RadioProtocol
from app.utils import clog2

logger = logging.getLogger(__name__)


# --------------------------------------------------
# DECAY
# --------------------------------------------------
def decay_decision(informed: bool, i: int, coin: float) -> bool:
    """Informed nodes send with probability 2^-i given a U[0,1) coin."""
    if i < 1:
        raise ValueError(f"decay index starts at 1, got {i}")
    return informed and coin < 2.0 ** -i


def decay_round(v: int, informed: bool, i: int, rng: np.random.Generator, payload: bytes = b"") -> NodeAction:
    if decay_decision(informed, i, float(rng.random())):
        return NodeAction.broadcast(payload)
    return LISTEN


# --------------------------------------------------
# REFERENCE PROTOCOLS
# --------------------------------------------------
class SilentProtocol(RadioProtocol):
    """Everyone listens for T rounds."""

    def __init__(self, length: int):
        self.name = f"silent:{length}"
        self.length = length

    def action(self, v, t, history):
        return LISTEN


class StarFloodProtocol(RadioProtocol):
    """The center (node 0) broadcasts M_t in round t."""

    def __init__(self, network: Network, length: int):
        center = network.adjacency[0]
        if network.directed or network.n < 2 or len(center) != network.n - 1:
            raise ConfigurationError(f"{network.name} is not a star centred at node 0")
        if any(network.adjacency[v] != {0} for v in range(1, network.n)):
            raise ConfigurationError(f"{network.name} is not a star centred at node 0")
        self.name = f"flood:{length}"
        self.length = length

    def action(self, v, t, history):
        if v == 0 and t <= self.length:
            return NodeAction.broadcast(history.private_input[t - 1])
        return LISTEN

    def random_inputs(self, network, rng):
        messages = tuple(rng.bytes(8) for _ in range(self.length))
        return (messages,) + tuple(() for _ in range(1, network.n))

    @staticmethod
    def inputs_for(network: Network, messages) -> tuple:
        return (tuple(messages),) + tuple(() for _ in range(1, network.n))


class RoundRobinProtocol(RadioProtocol):
    """
    Node groups take turns broadcasting their private input. Generated
    bipartite networks bring their own plan; elsewhere round t belongs to
    node (t-1) mod n.
    """

    def __init__(self, network: Network, length: int | None = None):
        if network.plan is not None:
            groups = network.plan
            if length is not None and length > len(groups):
                raise ConfigurationError(f"{network.name} plans {len(groups)} rounds, asked for {length}")
            groups = groups[: length or len(groups)]
        else:
            length = length or network.n
            groups = tuple(((t - 1) % network.n,) for t in range(1, length + 1))

        self.name = f"roundrobin:{len(groups)}"
        self.length = len(groups)
        self._senders = [frozenset(g) for g in groups]
        self._check_collision_free(network)

    def _check_collision_free(self, network: Network) -> None:
        for t, senders in enumerate(self._senders, start=1):
            for w in network.nodes:
                if w in senders:
                    continue
                if len(senders & network.in_neighbors(w)) > 1:
                    raise ScheduleMismatchError(f"round {t}: node {w} hears a collision")

    def action(self, v, t, history):
        if t <= self.length and v in self._senders[t - 1]:
            return NodeAction.broadcast(history.private_input)
        return LISTEN


class DecayBroadcastProtocol(RadioProtocol):
    """
    Single-message broadcast from node 0. Phases of K = max(1, ⌈log₂Δ⌉)
    rounds; in phase position i an informed node sends with probability
    2^-i using public coins, so receive rounds depend only on the coins.
    """

    def __init__(self, network: Network, length: int, seed: int = 0):
        self.name = f"decay:{length}"
        self.length = length
        self.phase = clog2(network.max_degree)
        self._coins = RandomStream(seed, PUBLIC_STREAM, network.n).uniforms(1, max(1, length))

    def action(self, v, t, history: History):
        informed = v == 0 or history.heard_anything
        payload = history.private_input if v == 0 else (history.events[0][1] if informed else b"")
        i = (t - 1) % self.phase + 1
        if decay_decision(informed, i, float(self._coins[t - 1, v])):
            return NodeAction.broadcast(payload)
        return LISTEN

    def random_inputs(self, network, rng):
        return (rng.bytes(8),) + tuple(b"" for _ in range(1, network.n))


# --------------------------------------------------
# FACTORY
# --------------------------------------------------
def make_protocol(spec, network: Network, seed: int = 0) -> RadioProtocol:
    """Builds the protocol a ProtocolSpec names on the given network."""
    kind, length = spec.kind, spec.T

    if kind == "roundrobin":
        return RoundRobinProtocol(network, length)
    if length is None:
        raise ConfigurationError(f"protocol {kind!r} needs a length, e.g. {kind}:8")

    if kind == "silent":
        return SilentProtocol(length)
    if kind == "flood":
        return StarFloodProtocol(network, length)
    if kind == "decay":
        return DecayBroadcastProtocol(network, length, seed)
    raise ConfigurationError(f"unknown protocol {kind!r}")

# app/core/engine.py

import logging
from bisect import bisect_left
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Sequence

import numpy as np

from app.core.network import Network
from app.core.noise import NoiseModel
from app.errors import ConfigurationError, ProtocolError

logger = logging.getLogger(__name__)

Event = tuple[int, bytes]


# --------------------------------------------------
# ACTIONS AND HISTORIES
# --------------------------------------------------
class ActionKind(str, Enum):
    LISTEN = "listen"
    BROADCAST = "broadcast"


@dataclass(frozen=True, slots=True)
class NodeAction:
    kind: ActionKind
    payload: bytes | None = None

    def __post_init__(self):
        if (self.kind is ActionKind.BROADCAST) != (self.payload is not None):
            raise ValueError("payload is present iff the action is a broadcast")

    @classmethod
    def broadcast(cls, payload: bytes) -> "NodeAction":
        return cls(ActionKind.BROADCAST, bytes(payload))

    @property
    def is_broadcast(self) -> bool:
        return self.kind is ActionKind.BROADCAST


LISTEN = NodeAction(ActionKind.LISTEN)


@dataclass(frozen=True)
class History:
    """What a node may base its round-t action on: its input and every
    receive event strictly before t."""

    private_input: Any
    events: tuple[Event, ...] = ()

    @classmethod
    def before(cls, private_input: Any, events: Sequence[Event], t: int) -> "History":
        cut = bisect_left(events, t, key=lambda e: e[0])
        return cls(private_input, tuple(events[:cut]))

    @property
    def heard_anything(self) -> bool:
        return bool(self.events)


def check_action(action: NodeAction, payload_cap: int, round_index: int, node: int) -> NodeAction:
    if not isinstance(action, NodeAction):
        raise ProtocolError(f"node {node} returned {action!r}, not a NodeAction", round_index, node)
    if action.is_broadcast and len(action.payload) > payload_cap:
        raise ProtocolError(
            f"node {node} broadcast {len(action.payload)} bytes, cap is {payload_cap}",
            round_index,
            node,
        )
    return action


# --------------------------------------------------
# RECEIVE RULE
# --------------------------------------------------
def deliver(network: Network, frames: Sequence[Any], faults: Sequence[bool]) -> list[Any]:
    """
    Radio receive rule over arbitrary frames (None = listen): v gets a frame
    iff it listens, exactly one in-neighbor sends, and it is not faulted.
    """
    n = network.n
    if len(frames) != n or len(faults) != n:
        raise ConfigurationError(
            f"expected {n} frames and faults, got {len(frames)} and {len(faults)}"
        )

    heard = [0] * n
    last = [None] * n
    for u, frame in enumerate(frames):
        if frame is None:
            continue
        for w in network.adjacency[u]:
            heard[w] += 1
            last[w] = frame

    return [
        last[v] if heard[v] == 1 and frames[v] is None and not faults[v] else None
        for v in range(n)
    ]


def step(network: Network, actions: Sequence[NodeAction], faults: Sequence[bool]) -> list[bytes | None]:
    frames = [a.payload if a.is_broadcast else None for a in actions]
    return deliver(network, frames, faults)


class Channel:
    """
    Physical rounds of one run: a round counter over a network and the
    fault stream of its noise model.
    """

    def __init__(self, network: Network, noise: NoiseModel):
        self.network = network
        self.noise = noise
        self.round = 0
        self.last_faults: np.ndarray | None = None
        self._faults = noise.fault_stream(network.n)

    def faults(self, start: int, count: int) -> np.ndarray:
        return self._faults.faults(start, count)

    def transmit(self, frames: Sequence[Any]) -> list[Any]:
        self.round += 1
        self.last_faults = self._faults.faults(self.round, 1)[0]
        return deliver(self.network, frames, self.last_faults)

    def peek_block(self, broadcast: np.ndarray, with_senders: bool = False):
        """
        Receive rule for the next R rounds given an (R, n) broadcast mask,
        without consuming them. Returns the (R, n) received mask, and with
        `with_senders` also the sender id per reception (-1 elsewhere).
        """
        rows, n = broadcast.shape
        if n != self.network.n:
            raise ConfigurationError(f"broadcast mask has {n} columns, network has {self.network.n} nodes")

        matrix = self.network.adjacency_matrix()
        sending = broadcast.astype(np.float64)
        counts = sending @ matrix
        received = (counts == 1.0) & ~broadcast & ~self.faults(self.round + 1, rows)
        if not with_senders:
            return received

        ids = (sending * np.arange(1, n + 1, dtype=np.float64)) @ matrix
        senders = np.where(received, np.rint(ids).astype(np.int64) - 1, -1)
        return received, senders

    def deliver_block(self, broadcast: np.ndarray, with_senders: bool = False):
        result = self.peek_block(broadcast, with_senders)
        self.round += broadcast.shape[0]
        return result

    def advance(self, rounds: int) -> None:
        self.round += rounds


# --------------------------------------------------
# TRANSCRIPTS
# --------------------------------------------------
@dataclass
class Transcript:
    inputs: tuple
    receives: list[list[Event]]
    actions: list[tuple[NodeAction, ...]] = field(default_factory=list)
    faults: list[np.ndarray] = field(default_factory=list)

    @property
    def rounds(self) -> int:
        return len(self.actions)

    def history(self, v: int) -> list[Event]:
        return list(self.receives[v])

    def receive_rounds(self, v: int) -> list[int]:
        return [r for r, _ in self.receives[v]]


def run(
    network: Network,
    protocol,
    inputs: Sequence[Any],
    noise: NoiseModel,
    max_rounds: int,
    payload_cap: int = 64,
) -> Transcript:
    """Executes `protocol` directly on the noisy channel for max_rounds rounds."""
    n = network.n
    if len(inputs) != n:
        raise ConfigurationError(f"expected {n} private inputs, got {len(inputs)}")

    channel = Channel(network, noise)
    transcript = Transcript(inputs=tuple(inputs), receives=[[] for _ in range(n)])

    for r in range(1, max_rounds + 1):
        actions = []
        for v in range(n):
            if r > protocol.length:
                actions.append(LISTEN)
                continue
            try:
                action = protocol.action(v, r, History(inputs[v], tuple(transcript.receives[v])))
            except ProtocolError:
                raise
            except Exception as exc:
                raise ProtocolError(f"node {v} failed: {exc}", r, v) from exc
            actions.append(check_action(action, payload_cap, r, v))

        received = channel.transmit([a.payload if a.is_broadcast else None for a in actions])
        for v, payload in enumerate(received):
            if payload is not None:
                transcript.receives[v].append((r, payload))
        transcript.actions.append(tuple(actions))
        transcript.faults.append(channel.last_faults)

    logger.debug("run on %s finished after %d rounds (p=%s)", network.name, max_rounds, noise.p)
    return transcript


def verify_simulation(original: Transcript, reconstruction: Sequence[Sequence[Event]]) -> list[bool]:
    return [
        list(map(tuple, claimed)) == list(original.receives[v])
        for v, claimed in enumerate(reconstruction)
    ]

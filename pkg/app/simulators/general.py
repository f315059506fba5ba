# app/simulators/general.py

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from app.config import DEFAULT_CONSTANTS, SimulationConstants
from app.core.engine import Channel, History, NodeAction
from app.core.network import Network
from app.core.noise import NoiseModel, SHARE_STREAM
from app.errors import IncompleteHistoryError
from app.simulators.common import NodeActions, SimulationReport, require_undirected, resolve_inputs
from app.utils import ceil_ln, clog2

logger = logging.getLogger(__name__)


class Marker(Enum):
    NOT_BROADCASTING = "not-broadcasting"


NOT_BROADCASTING = Marker.NOT_BROADCASTING


@dataclass(frozen=True, slots=True)
class Token:
    origin: int
    round: int
    content: bytes | Marker

    @property
    def broadcasting(self) -> bool:
        return self.content is not NOT_BROADCASTING

    @classmethod
    def of(cls, origin: int, round_index: int, action: NodeAction) -> "Token":
        return cls(origin, round_index, action.payload if action.is_broadcast else NOT_BROADCASTING)


class TokenStore:
    """Tokens one node holds about its neighbours, slot per (neighbour, round)."""

    def __init__(self, neighbors, length: int):
        self.length = length
        self._slots: dict[int, list[Token | None]] = {w: [None] * (length + 1) for w in sorted(neighbors)}

    @property
    def neighbors(self) -> list[int]:
        return list(self._slots)

    def put(self, token: Token) -> None:
        slots = self._slots.get(token.origin)
        if slots is not None and 1 <= token.round <= self.length:
            slots[token.round] = token

    def get(self, origin: int, round_index: int) -> Token | None:
        return self._slots[origin][round_index]

    def has_round(self, round_index: int) -> bool:
        return all(slots[round_index] is not None for slots in self._slots.values())

    def round_tokens(self, round_index: int) -> list[Token]:
        tokens = [slots[round_index] for slots in self._slots.values()]
        missing = [w for w, tok in zip(self._slots, tokens) if tok is None]
        if missing:
            raise IncompleteHistoryError(f"round {round_index}: no token from {missing}")
        return tokens

    def __len__(self) -> int:
        return sum(tok is not None for slots in self._slots.values() for tok in slots)


def round_receipt(tokens: list[Token], own: NodeAction) -> bytes | None:
    """Payload v received in the faultless round the tokens describe, if any."""
    if own.is_broadcast:
        return None
    sending = [tok for tok in tokens if tok.broadcasting]
    return sending[0].content if len(sending) == 1 else None


def reconstruct_history(store: TokenStore, protocol, v: int, private_input, upto: int) -> list:
    """v's faultless receive events for rounds < upto, rebuilt from tokens."""
    events: list = []
    for r in range(1, upto):
        tokens = store.round_tokens(r)
        own = protocol.action(v, r, History(private_input, tuple(events)))
        payload = round_receipt(tokens, own)
        if payload is not None:
            events.append((r, payload))
    return events


# --------------------------------------------------
# SHARE KNOWLEDGE
# --------------------------------------------------
def share_knowledge(
    channel: Channel,
    messages: list,
    constants: SimulationConstants = DEFAULT_CONSTANTS,
) -> list[dict[int, object]]:
    """
    c4·Δ·⌈log₂Δ⌉ rounds in which every node sends its message with
    probability 1/max(Δ, 2). Returns, per node, the messages heard keyed
    by sender.
    """
    network = channel.network
    delta = network.max_degree
    rounds = constants.c4 * delta * clog2(delta)
    coins = channel.noise.stream(SHARE_STREAM, network.n).uniforms(channel.round + 1, rounds)
    sending = coins < 1.0 / max(delta, 2)

    received, senders = channel.deliver_block(sending, with_senders=True)
    heard: list[dict[int, object]] = [dict() for _ in network.nodes]
    for row, v in zip(*np.nonzero(received)):
        s = int(senders[row, v])
        if messages[s] is not None:
            heard[v][s] = messages[s]
    return heard


# --------------------------------------------------
# MAIN GENERAL
# --------------------------------------------------
def main_general(
    protocol,
    network: Network,
    noise: NoiseModel,
    inputs=None,
    constants: SimulationConstants = DEFAULT_CONSTANTS,
    iterations: int | None = None,
) -> SimulationReport:
    """
    Token-exchange simulation of an arbitrary protocol. Each iteration
    shares virtual rounds, lets every node help the smallest one it heard
    by sharing its token for that round, then advances t_v over every
    round whose neighbour tokens are all held.
    """
    require_undirected(network, "sim_general")
    inputs = resolve_inputs(protocol, network, noise, inputs)
    n, length = network.n, protocol.length
    budget = iterations or constants.c5 * (length * clog2(network.max_degree) + ceil_ln(n))

    channel = Channel(network, noise)
    stores = [TokenStore(network.neighbors(v), length) for v in network.nodes]
    histories: list[list] = [[] for _ in range(n)]
    actions = NodeActions(protocol, inputs, histories, constants.payload_cap)
    t = [1] * n
    completion_rounds: list[int | None] = [0 if length == 0 else None for _ in range(n)]
    used = 0

    for _ in range(budget):
        if min(t) > length:
            break
        used += 1

        heard_rounds = share_knowledge(channel, list(t), constants)
        helped = [min([t[v], *heard_rounds[v].values()]) for v in range(n)]
        tokens = [
            Token.of(v, helped[v], actions(v, helped[v])) if helped[v] <= length else None
            for v in range(n)
        ]
        for v, heard in enumerate(share_knowledge(channel, tokens, constants)):
            for token in heard.values():
                stores[v].put(token)

        for v in range(n):
            while t[v] <= length and stores[v].has_round(t[v]):
                payload = round_receipt(stores[v].round_tokens(t[v]), actions(v, t[v]))
                if payload is not None:
                    histories[v].append((t[v], payload))
                t[v] += 1
                if t[v] > length:
                    completion_rounds[v] = channel.round

    completed = [tv > length for tv in t]
    if not all(completed):
        logger.warning(
            "sim_general on %s: %d of %d iterations used, %d nodes behind",
            network.name, used, budget, completed.count(False),
        )

    return SimulationReport(
        simulator="general",
        histories=histories,
        rounds=channel.round,
        scheduled_rounds=budget * 2 * constants.c4 * network.max_degree * clog2(network.max_degree),
        completed=completed,
        completion_rounds=completion_rounds,
        extras={"iterations": used, "token_stores": stores, "virtual_rounds": t},
    )

# app/protocols/base.py

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any

import numpy as np

from app.core.engine import History, NodeAction
from app.core.network import Network


class RadioProtocol(ABC):
    """
    A faultless radio protocol of `length` rounds. action(v, t, history)
    may read only the private input and the receive events before t.
    """

    name: str = "protocol"
    length: int = 0
    schedule = None

    @abstractmethod
    def action(self, v: int, t: int, history: History) -> NodeAction:
        ...

    def random_inputs(self, network: Network, rng: np.random.Generator) -> tuple[Any, ...]:
        return tuple(rng.bytes(8) for _ in network.nodes)

    @property
    def is_static(self) -> bool:
        return self.schedule is not None


# --------------------------------------------------
# STATIC SCHEDULES
# --------------------------------------------------
@dataclass(frozen=True)
class StaticSchedule:
    """M_v per node: sorted rounds in [1, T] with a collision-free receipt."""

    length: int
    rounds: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for v, rs in enumerate(self.rounds):
            if list(rs) != sorted(set(rs)) or any(not 1 <= r <= self.length for r in rs):
                raise ValueError(f"schedule of node {v} is not a sorted subset of [1, {self.length}]")

    def cursor(self, v: int) -> "ScheduleCursor":
        return ScheduleCursor(self.rounds[v], self.length + 1)

    def records(self) -> list[dict]:
        return [{"node": v, "rounds": list(rs)} for v, rs in enumerate(self.rounds)]


class ScheduleCursor:
    """getNextRound over one M_v; returns the sentinel T+1 once exhausted."""

    def __init__(self, rounds: tuple[int, ...], sentinel: int):
        self._rounds = rounds
        self._index = 0
        self.sentinel = sentinel

    @property
    def next_round(self) -> int:
        if self._index < len(self._rounds):
            return self._rounds[self._index]
        return self.sentinel

    @property
    def fulfilled(self) -> int:
        return self._index

    @property
    def exhausted(self) -> bool:
        return self._index >= len(self._rounds)

    def fulfill(self, round_index: int) -> None:
        if round_index != self.next_round or self.exhausted:
            raise ValueError(f"round {round_index} is not the pending round {self.next_round}")
        self._index += 1


class StaticProtocol(RadioProtocol):
    """A protocol paired with its (input-independent) receive schedule."""

    def __init__(self, protocol: RadioProtocol, schedule: StaticSchedule):
        if schedule.length != protocol.length:
            raise ValueError("schedule and protocol lengths differ")
        self.inner = protocol
        self.schedule = schedule
        self.name = protocol.name
        self.length = protocol.length

    def action(self, v: int, t: int, history: History) -> NodeAction:
        return self.inner.action(v, t, history)

    def random_inputs(self, network: Network, rng: np.random.Generator):
        return self.inner.random_inputs(network, rng)

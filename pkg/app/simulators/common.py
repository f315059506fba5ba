# app/simulators/common.py

from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from app.core.engine import LISTEN, Event, History, NodeAction, check_action
from app.core.network import Network
from app.core.noise import INPUT_STREAM, NoiseModel
from app.errors import ConfigurationError, ProtocolError


@dataclass
class SimulationReport:
    """
    Outcome of one simulated execution. `histories` are the claimed
    faultless receive histories; `verified` is filled in by the runner.
    """

    simulator: str
    histories: list[list[Event]]
    rounds: int
    scheduled_rounds: int
    completed: list[bool]
    completion_rounds: list[int | None]
    verified: list[bool] | None = None
    extras: dict[str, Any] = field(default_factory=dict)

    @property
    def all_completed(self) -> bool:
        return all(self.completed)

    @property
    def all_verified(self) -> bool:
        return self.verified is not None and all(self.verified)

    @property
    def max_completion_round(self) -> int | None:
        if not self.all_completed:
            return None
        return max((r or 0) for r in self.completion_rounds)


class NodeActions:
    """
    P(v, x) evaluated against v's claimed history before x, memoised per
    (v, x). Callers only ask for rounds whose history is already final.
    """

    def __init__(self, protocol, inputs: Sequence[Any], histories: list[list[Event]], payload_cap: int):
        self.protocol = protocol
        self.inputs = inputs
        self.histories = histories
        self.payload_cap = payload_cap
        self._memo: dict[tuple[int, int], NodeAction] = {}

    def __call__(self, v: int, x: int) -> NodeAction:
        if x < 1 or x > self.protocol.length:
            return LISTEN
        key = (v, x)
        action = self._memo.get(key)
        if action is None:
            try:
                action = self.protocol.action(v, x, History.before(self.inputs[v], self.histories[v], x))
            except ProtocolError:
                raise
            except Exception as exc:
                raise ProtocolError(f"node {v} failed: {exc}", x, v) from exc
            action = check_action(action, self.payload_cap, x, v)
            self._memo[key] = action
        return action


def require_undirected(network: Network, simulator: str) -> None:
    if network.directed:
        raise ConfigurationError(f"{simulator} simulates undirected networks only, got {network.name}")


def resolve_inputs(protocol, network: Network, noise: NoiseModel, inputs=None) -> tuple:
    if inputs is None:
        rng = noise.stream(INPUT_STREAM, 1).generator()
        return tuple(protocol.random_inputs(network, rng))
    if len(inputs) != network.n:
        raise ConfigurationError(f"expected {network.n} private inputs, got {len(inputs)}")
    return tuple(inputs)


def first_true_row(mask: np.ndarray) -> np.ndarray:
    """Index of the first True per column, -1 where a column has none."""
    hit = mask.any(axis=0)
    return np.where(hit, mask.argmax(axis=0), -1)

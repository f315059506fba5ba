# app/simulators/primitives.py

import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from app.config import DEFAULT_CONSTANTS, SimulationConstants
from app.core.engine import Channel
from app.core.noise import DECAY_STREAM
from app.errors import WindowError
from app.utils import decay_lengths, learn_delays_iterations

logger = logging.getLogger(__name__)


class DistanceLabel(str, Enum):
    ZERO = "=0"
    ONE = "=1"
    TWO = "=2"
    FAR = ">2"


LABELS = (DistanceLabel.ZERO, DistanceLabel.ONE, DistanceLabel.TWO, DistanceLabel.FAR)


@dataclass
class PrimitiveKit:
    """
    Channel plus the coin stream and phase lengths the control primitives
    share. With `oracle` set, distance probes are exact and broadcasts
    lossless; the rounds they would take are still consumed.
    """

    channel: Channel
    constants: SimulationConstants = DEFAULT_CONSTANTS
    oracle: bool = False

    def __post_init__(self):
        network = self.channel.network
        self.network = network
        self.coins = self.channel.noise.stream(DECAY_STREAM, network.n)
        self.outer, self.inner = decay_lengths(network.max_degree, network.n, self.constants.c3)
        exponents = np.tile(np.arange(1, self.inner + 1), self.outer)
        self.send_probability = 2.0 ** -exponents

    @property
    def decay_rounds(self) -> int:
        return self.outer * self.inner

    def decay_mask(self, broadcasting: np.ndarray) -> np.ndarray:
        """Which non-broadcasting nodes heard the common payload."""
        if self.oracle:
            self.channel.advance(self.decay_rounds)
            return (self.network.adjacency_matrix().T @ broadcasting.astype(np.float64) > 0) & ~broadcasting

        coins = self.coins.uniforms(self.channel.round + 1, self.decay_rounds)
        sending = (coins < self.send_probability[:, None]) & broadcasting[None, :]
        received = self.channel.deliver_block(sending)
        return received.any(axis=0) & ~broadcasting


# --------------------------------------------------
# BROADCAST (DECAY)
# --------------------------------------------------
def broadcast_decay(kit: PrimitiveKit, broadcasting: np.ndarray, payload) -> list:
    """
    Every node in `broadcasting` sends `payload` with probability 2^-i in
    position i of each inner sweep. Returns the payload per listener that
    heard it, None elsewhere.
    """
    heard = kit.decay_mask(np.asarray(broadcasting, dtype=bool))
    return [payload if h else None for h in heard]


# --------------------------------------------------
# DIST TO ACTIVE
# --------------------------------------------------
def dist_to_active_codes(kit: PrimitiveKit, active: np.ndarray) -> np.ndarray:
    """0, 1, 2 or 3 (meaning more than 2) per node."""
    active = np.asarray(active, dtype=bool)
    near = kit.decay_mask(active)
    relay = near & ~active
    second = kit.decay_mask(relay) & ~active & ~near

    codes = np.full(active.shape, 3, dtype=np.int8)
    codes[second] = 2
    codes[near] = 1
    codes[active] = 0
    return codes


def dist_to_active(kit: PrimitiveKit, active: np.ndarray) -> list[DistanceLabel]:
    return [LABELS[c] for c in dist_to_active_codes(kit, active)]


# --------------------------------------------------
# LEARN DELAYS
# --------------------------------------------------
@dataclass
class LearnDelaysTrace:
    """Per-iteration snapshots (lo, hi, mid, active, silent, codes)."""

    steps: list[dict[str, np.ndarray]] = field(default_factory=list)

    def record(self, **arrays):
        self.steps.append({k: np.array(a, copy=True) for k, a in arrays.items()})


def learn_delays(
    kit: PrimitiveKit,
    t: np.ndarray,
    throttle: int,
    window: int,
    trace: LearnDelaysTrace | None = None,
) -> np.ndarray:
    """
    Distributed binary search of each node for the smallest virtual round
    in its neighbourhood, over [L - Q, L]. Nodes labelled "=2" fall silent
    for the rest of the call. Runs a fixed ⌈log₂(Q+1)⌉ iterations so every
    node stays in the same phase.
    """
    t = np.asarray(t, dtype=np.int64)
    if kit.oracle and ((t < throttle - window) | (t > throttle)).any():
        raise WindowError(
            f"virtual rounds {int(t.min())}..{int(t.max())} leave window "
            f"[{throttle - window}, {throttle}]"
        )

    lo = np.full(t.shape, throttle - window, dtype=np.int64)
    hi = np.full(t.shape, throttle, dtype=np.int64)
    silent = np.zeros(t.shape, dtype=bool)

    for _ in range(learn_delays_iterations(window)):
        searching = lo != hi
        mid = (lo + hi) // 2
        active = searching & ~silent & (t <= mid)
        codes = dist_to_active_codes(kit, active)

        silent |= searching & (codes == 2)
        near = searching & (codes <= 1)
        far = searching & (codes >= 2)
        hi = np.where(near, mid, hi)
        lo = np.where(far, mid + 1, lo)

        if trace is not None:
            trace.record(lo=lo, hi=hi, mid=mid, active=active, silent=silent, codes=codes)

    return lo

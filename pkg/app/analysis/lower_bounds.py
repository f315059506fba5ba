# app/analysis/lower_bounds.py

import logging

import numpy as np
import pandas as pd

from app.analysis import coding
from app.analysis.oracles import expected_extra_draws, expected_max_geometric
from app.core.engine import Channel
from app.core.graphs import directed_bipartite, star
from app.core.noise import CODING_STREAM, NoiseModel
from app.simulators.common import first_true_row

logger = logging.getLogger(__name__)


def _repeat_until_heard(channel: Channel, sender: int, listeners: np.ndarray, chunk: int = 16) -> int:
    """Rounds of `sender` repeating alone until every listener received once."""
    row = np.zeros(channel.network.n, dtype=bool)
    row[sender] = True
    block = np.tile(row, (chunk, 1))

    pending = np.asarray(listeners, dtype=np.int64)
    used = 0
    while True:
        received = channel.peek_block(block)[:, pending]
        first = first_true_row(received)
        if (first >= 0).all():
            finish = int(first.max()) + 1
            channel.advance(finish)
            return used + finish
        pending = pending[first < 0]
        channel.advance(chunk)
        used += chunk


# --------------------------------------------------
# STAR: REPETITION
# --------------------------------------------------
def star_repetition_rounds(delta: int, length: int, p: float, seeds) -> pd.DataFrame:
    """
    The center repeats M_1, ..., M_T, each until every leaf has it.
    One row per seed.
    """
    network = star(delta)
    leaves = np.arange(1, network.n)
    rows = []
    for seed in seeds:
        channel = Channel(network, NoiseModel(p, seed))
        per_message = [_repeat_until_heard(channel, 0, leaves) for _ in range(length)]
        rows.append({
            "delta": delta,
            "T": length,
            "p": p,
            "seed": seed,
            "total_rounds": int(sum(per_message)),
            "rounds_per_T": sum(per_message) / length,
            "max_message_rounds": int(max(per_message)),
        })
    return pd.DataFrame(rows)


def repetition_oracle(delta: int, p: float) -> float:
    """Expected rounds per message: E[max of Δ Geometric(1 - p)]."""
    return expected_max_geometric(delta, 1.0 - p)


# --------------------------------------------------
# STAR: RANDOM LINEAR CODING
# --------------------------------------------------
class CodedStar:
    """
    Per-leaf decoding state of one coded run. Every received combination
    goes through the leaf's incremental echelon, so a leaf finishes at the
    exact round its combinations first reach rank T.
    """

    def __init__(self, delta: int, length: int):
        self.length = length
        self.echelons = [coding.Echelon(length) for _ in range(delta)]
        self.received: list[list[int]] = [[] for _ in range(delta)]
        self.finished: list[int | None] = [None] * delta

    def receive(self, leaf: int, index: int, row) -> None:
        """Leaf hears combination number `index` (sent in round index + 1)."""
        if self.finished[leaf] is not None:
            return
        self.received[leaf].append(index)
        echelon = self.echelons[leaf]
        if echelon.add(row) and echelon.full:
            self.finished[leaf] = index + 1

    @property
    def done(self) -> bool:
        return all(f is not None for f in self.finished)

    def total_rounds(self) -> int:
        return max(self.finished)

    def bottleneck(self) -> int:
        return int(np.argmax(self.finished))

    def extra_receptions(self) -> list[int]:
        return [len(rows) - self.length for rows in self.received]


def _coded_run(delta: int, length: int, p: float, seed: int, chunk: int = 64) -> tuple[CodedStar, np.ndarray]:
    network = star(delta)
    noise = NoiseModel(p, seed)
    channel = Channel(network, noise)
    rng = noise.stream(CODING_STREAM, 1).generator()

    center = np.zeros(network.n, dtype=bool)
    center[0] = True
    block = np.tile(center, (chunk, 1))

    coefficients = np.zeros((0, length), dtype=np.uint8)
    state = CodedStar(delta, length)
    while not state.done:
        fresh = coding.random_coefficients(chunk, length, rng).view(np.ndarray).astype(np.uint8)
        base = coefficients.shape[0]
        coefficients = np.vstack([coefficients, fresh])
        heard = channel.deliver_block(block)[:, 1:]
        for leaf, row in zip(*np.nonzero(heard.T)):
            index = base + int(row)
            state.receive(int(leaf), index, coefficients[index])
    return state, coefficients


def star_coded_rounds(delta: int, length: int, p: float, seeds) -> pd.DataFrame:
    """
    The center broadcasts a fresh random combination over GF(256) of the T
    messages each round; a leaf is done once its combinations reach rank T.
    Every leaf is rank-tracked; the bottleneck leaf also decodes messages.
    """
    rows = []
    for seed in seeds:
        state, coefficients = _coded_run(delta, length, p, seed)
        total = state.total_rounds()

        rng = np.random.default_rng(seed)
        messages = coding.GF(rng.integers(0, 256, size=(length, 4), dtype=np.uint8))
        rows_used = coding.GF(coefficients[state.received[state.bottleneck()]])
        decoded = coding.decode(rows_used, coding.encode(rows_used, messages))

        rows.append({
            "delta": delta,
            "T": length,
            "p": p,
            "seed": seed,
            "total_rounds": total,
            "rounds_per_T": total / length,
            "mean_extra_receptions": float(np.mean(state.extra_receptions())),
            "decoded": bool(np.array_equal(decoded, messages)),
        })
    return pd.DataFrame(rows)


def coded_extra_oracle(length: int) -> float:
    """Expected receptions beyond T a leaf needs before its rank reaches T."""
    return expected_extra_draws(length)


# --------------------------------------------------
# DIRECTED BIPARTITE
# --------------------------------------------------
def directed_bipartite_experiment(delta: int, p: float, seeds) -> pd.DataFrame:
    """l_1, ..., l_Δ in turn repeat until every right node has their message."""
    network = directed_bipartite(delta)
    right = np.arange(delta, 2 * delta)
    rows = []
    for seed in seeds:
        channel = Channel(network, NoiseModel(p, seed))
        per_sender = [_repeat_until_heard(channel, i, right) for i in range(delta)]
        rows.append({
            "delta": delta,
            "p": p,
            "seed": seed,
            "total_rounds": int(sum(per_sender)),
            "mean_sender_rounds": sum(per_sender) / delta,
            "reference": delta * np.log2(delta),
        })
    return pd.DataFrame(rows)


def directed_bipartite_oracle(delta: int, p: float) -> float:
    return delta * expected_max_geometric(delta, 1.0 - p)


def lower_bound_gap(repetition: pd.DataFrame, coded: pd.DataFrame) -> dict:
    """Mean rounds per message of each strategy and the sigma-scaled gap."""
    rep = repetition["rounds_per_T"]
    cod = coded["rounds_per_T"]
    sigma = float(np.sqrt(rep.var(ddof=1) / len(rep) + cod.var(ddof=1) / len(cod))) if len(rep) > 1 and len(cod) > 1 else 0.0
    gap = float(rep.mean() - cod.mean())
    return {
        "repetition_per_T": float(rep.mean()),
        "coded_per_T": float(cod.mean()),
        "gap": gap,
        "gap_sigmas": gap / sigma if sigma > 0 else float("inf"),
    }

# app/core/noise.py

from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from app.errors import ParameterError

# Stream ids: every randomness consumer derives its draws from the same
# seed through its own stream so draws never depend on call order.
FAULT_STREAM = 0
DECAY_STREAM = 1
SHARE_STREAM = 2
PUBLIC_STREAM = 3
CODING_STREAM = 4
INPUT_STREAM = 5


class RandomStream:
    """
    Counter-based uniforms indexed by (round, node).

    Rounds are 1-based and grouped into blocks of `block_rounds`; block b of
    stream s under seed k is a Philox generator keyed by k with counter
    (b << 128) | (s << 192). Any (round, node) draw is therefore the same no
    matter which rounds were requested before it.
    """

    block_rounds = 256

    def __init__(self, seed: int, stream: int, width: int, cache_blocks: int = 8):
        if seed < 0 or seed >= 2**64:
            raise ParameterError(f"seed must be a 64-bit unsigned integer, got {seed}")
        if width < 1:
            raise ParameterError("stream width must be positive")
        self.seed = seed
        self.stream = stream
        self.width = width
        self._blocks: OrderedDict[int, np.ndarray] = OrderedDict()
        self._cache_blocks = cache_blocks

    def _block(self, index: int) -> np.ndarray:
        block = self._blocks.get(index)
        if block is not None:
            self._blocks.move_to_end(index)
            return block

        bitgen = np.random.Philox(key=self.seed, counter=(index << 128) | (self.stream << 192))
        block = np.random.Generator(bitgen).random((self.block_rounds, self.width))
        self._blocks[index] = block
        if len(self._blocks) > self._cache_blocks:
            self._blocks.popitem(last=False)
        return block

    def uniforms(self, start: int, count: int) -> np.ndarray:
        """(count, width) array of U[0,1) draws for rounds start..start+count-1."""
        if start < 1:
            raise ParameterError(f"rounds are 1-based, got {start}")
        out = np.empty((count, self.width), dtype=np.float64)
        filled = 0
        while filled < count:
            index, offset = divmod(start + filled - 1, self.block_rounds)
            take = min(self.block_rounds - offset, count - filled)
            out[filled:filled + take] = self._block(index)[offset:offset + take]
            filled += take
        return out

    def row(self, round_index: int) -> np.ndarray:
        return self.uniforms(round_index, 1)[0]

    def generator(self, tag: int = 0) -> np.random.Generator:
        """A free-running generator on this stream, for draws not tied to rounds."""
        counter = ((2**64 - 1 - tag) << 128) | (self.stream << 192)
        return np.random.Generator(np.random.Philox(key=self.seed, counter=counter))


class FaultStream:
    def __init__(self, p: float, stream: RandomStream):
        self.p = p
        self._stream = stream

    def faults(self, start: int, count: int) -> np.ndarray:
        if self.p == 0.0:
            return np.zeros((count, self._stream.width), dtype=bool)
        return self._stream.uniforms(start, count) < self.p


@dataclass(frozen=True)
class NoiseModel:
    """Independent receiver faults with probability p per (node, round)."""

    p: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.p < 1.0:
            raise ParameterError(f"fault probability must lie in [0, 1), got {self.p}")
        if not 0 <= self.seed < 2**64:
            raise ParameterError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    def stream(self, stream_id: int, width: int) -> RandomStream:
        return RandomStream(self.seed, stream_id, width)

    def fault_stream(self, width: int) -> FaultStream:
        return FaultStream(self.p, self.stream(FAULT_STREAM, width))

    def faultless(self) -> "NoiseModel":
        return NoiseModel(p=0.0, seed=self.seed)

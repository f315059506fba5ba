# app/analysis/coding.py

import galois
import numpy as np

GF = galois.GF(2**8)


def random_coefficients(rows: int, length: int, rng: np.random.Generator) -> galois.FieldArray:
    """Uniform nonzero coefficient vectors; an all-zero row carries nothing."""
    coefficients = GF.Random((rows, length), seed=rng)
    while True:
        empty = np.flatnonzero(~coefficients.view(np.ndarray).any(axis=1))
        if empty.size == 0:
            return coefficients
        coefficients[empty] = GF.Random((empty.size, length), seed=rng)


def rank(rows: galois.FieldArray) -> int:
    if rows.shape[0] == 0:
        return 0
    return int(np.linalg.matrix_rank(rows))


def encode(coefficients: galois.FieldArray, messages: galois.FieldArray) -> galois.FieldArray:
    """Coded packets: one random linear combination of the messages per row."""
    return coefficients @ messages


def decode(coefficients: galois.FieldArray, packets: galois.FieldArray) -> galois.FieldArray:
    """
    Messages from any set of packets whose coefficients have full column
    rank, by row-reducing [C | P].
    """
    length = coefficients.shape[1]
    if rank(coefficients) < length:
        raise ValueError("received combinations do not span the message space")
    reduced = np.hstack([coefficients, packets]).row_reduce()
    return reduced[:length, length:]


def as_symbols(messages: list[bytes]) -> galois.FieldArray:
    width = max(len(m) for m in messages)
    return GF(np.array([list(m.ljust(width, b"\0")) for m in messages], dtype=np.uint8))


class Echelon:
    """
    Reduced row echelon basis grown one received combination at a time.
    Each `add` costs one reduction against the current basis, so a leaf's
    rank is known after every reception without refactoring from scratch.
    """

    def __init__(self, length: int):
        self.length = length
        self.basis = GF.Zeros((0, length))
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def full(self) -> bool:
        return self.rank == self.length

    def add(self, row) -> bool:
        """Adds `row`; False when it already lies in the span."""
        vector = GF(np.asarray(row, dtype=np.uint8))
        if self.pivots:
            vector = vector - vector[self.pivots] @ self.basis
        nonzero = np.flatnonzero(vector)
        if nonzero.size == 0:
            return False

        column = int(nonzero[0])
        vector = vector / vector[column]
        if self.pivots:
            self.basis = self.basis - self.basis[:, column][:, np.newaxis] * vector[np.newaxis, :]
        self.basis = GF(np.vstack([self.basis.view(np.ndarray), vector.view(np.ndarray)[np.newaxis, :]]))
        self.pivots.append(column)
        return True

# app/analysis/oracles.py
"""
Exact reference values for the Monte Carlo experiments. Slow and simple
on purpose; every experiment is checked against these.
"""

import math
from itertools import product

import numpy as np

from app.utils import clog2, decay_lengths

SIGMA_BAND = 4.0


# --------------------------------------------------
# MAXIMA OF GEOMETRICS
# --------------------------------------------------
def max_geometric_cdf(y: int, count: int, q: float) -> float:
    """P(max of `count` iid Geometric(q) on {1, 2, ...} ≤ y)."""
    if y < 1:
        return 0.0
    return (1.0 - (1.0 - q) ** y) ** count


def max_geometric_tail(y: int, count: int, q: float) -> float:
    """P(max ≥ y)."""
    return 1.0 - max_geometric_cdf(y - 1, count, q)


def expected_max_geometric(count: int, q: float, tol: float = 1e-15) -> float:
    """E[max] = Σ_{k≥0} P(max > k)."""
    if q >= 1.0:
        return 1.0
    total, k = 0.0, 0
    while True:
        term = 1.0 - (1.0 - (1.0 - q) ** k) ** count
        total += term
        if term < tol:
            return total
        k += 1


def max_geometric_pmf(count: int, q: float, tol: float = 1e-16) -> np.ndarray:
    """pmf[y] = P(max = y) for y = 0..Y with the tail beyond Y below tol."""
    if q >= 1.0:
        return np.array([0.0, 1.0])
    values = [0.0]
    y = 1
    while True:
        values.append(max_geometric_cdf(y, count, q) - max_geometric_cdf(y - 1, count, q))
        if 1.0 - max_geometric_cdf(y, count, q) < tol:
            return np.asarray(values)
        y += 1


def sum_of_maxima_tail(threshold: float, terms: int, count: int, q: float) -> float:
    """P(Σ of `terms` iid maxima ≥ threshold), by repeated convolution."""
    pmf = max_geometric_pmf(count, q)
    dist = np.array([1.0])
    for _ in range(terms):
        dist = np.convolve(dist, pmf)
    start = max(0, math.ceil(threshold))
    return float(dist[start:].sum())


def median_max_geometric(count: int, q: float) -> int:
    y = 1
    while max_geometric_cdf(y, count, q) < 0.5:
        y += 1
    return y


# --------------------------------------------------
# GF(256) RANK STATISTICS
# --------------------------------------------------
def full_rank_probability(k: int, field_size: int = 256) -> float:
    """P(a uniform k×k matrix over GF(q) is invertible) = Π (1 - q^-i)."""
    return math.prod(1.0 - field_size ** -i for i in range(1, k + 1))


def expected_draws_to_full_rank(k: int, field_size: int = 256) -> float:
    """Expected uniform nonzero vectors in GF(q)^k drawn until they span the space."""
    whole = 1.0 - field_size ** -k
    return sum(whole / (1.0 - field_size ** -j) for j in range(1, k + 1))


def expected_extra_draws(k: int, field_size: int = 256) -> float:
    return expected_draws_to_full_rank(k, field_size) - k


# --------------------------------------------------
# BINOMIAL TOLERANCE
# --------------------------------------------------
def binomial_sigma(probability: float, trials: int) -> float:
    return math.sqrt(max(probability * (1.0 - probability), 0.0) / trials)


def within_band(observed: float, expected: float, sigma: float, band: float = SIGMA_BAND) -> bool:
    return abs(observed - expected) <= band * sigma + 1e-12


# --------------------------------------------------
# DECAY / SHARE KNOWLEDGE
# --------------------------------------------------
def decay_round_success(informed: int, i: int, p: float = 0.0) -> float:
    """P(a listener with `informed` sending neighbours receives in sweep position i)."""
    s = 2.0 ** -i
    return informed * s * (1.0 - s) ** (informed - 1) * (1.0 - p)


def decay_round_success_enumerated(informed: int, i: int, p: float = 0.0) -> float:
    """Same as decay_round_success, by enumerating every broadcast pattern."""
    s = 2.0 ** -i
    total = 0.0
    for pattern in product((0, 1), repeat=informed):
        if sum(pattern) == 1:
            total += s * (1.0 - s) ** (informed - 1)
    return total * (1.0 - p)


def decay_success(informed: int, max_degree: int, n: int, c3: int, p: float = 0.0) -> float:
    """P(a listener hears a full broadcast_decay call)."""
    if informed == 0:
        return 0.0
    outer, inner = decay_lengths(max_degree, n, c3)
    miss_sweep = math.prod(1.0 - decay_round_success(informed, i, p) for i in range(1, inner + 1))
    return 1.0 - miss_sweep ** outer


def share_direction_success(max_degree: int, neighbours_of_receiver: int, c4: int, p: float = 0.0) -> float:
    """
    P(a fixed node hears a fixed neighbour during one share_knowledge call):
    the neighbour sends, the receiver and its other neighbours stay quiet.
    """
    a = 1.0 / max(max_degree, 2)
    rounds = c4 * max_degree * clog2(max_degree)
    per_round = a * (1.0 - a) ** neighbours_of_receiver * (1.0 - p)
    return 1.0 - (1.0 - per_round) ** rounds

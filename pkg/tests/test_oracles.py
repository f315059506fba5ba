import math

import numpy as np
import pytest

from app.analysis import coding, oracles
from app.core.engine import Channel
from app.core.graphs import star
from app.core.noise import NoiseModel
from app.simulators.primitives import PrimitiveKit


@pytest.mark.parametrize("informed", [1, 2, 3, 5])
@pytest.mark.parametrize("i", [1, 2, 3])
def test_decay_round_closed_form_matches_enumeration(informed, i):
    assert oracles.decay_round_success(informed, i, 0.25) == pytest.approx(
        oracles.decay_round_success_enumerated(informed, i, 0.25)
    )


def test_decay_on_an_edge_at_default_constants():
    assert oracles.decay_success(1, 1, 2, 4) == pytest.approx(0.9375)
    assert oracles.decay_success(0, 4, 16, 4) == 0.0


def test_share_on_an_edge():
    assert oracles.share_direction_success(1, 1, 6) == pytest.approx(1 - 0.75**6)
    assert oracles.share_direction_success(1, 1, 6) == pytest.approx(0.822, abs=1e-3)


def test_decay_mask_rate_matches_oracle():
    network = star(8)
    kit = PrimitiveKit(Channel(network, NoiseModel(0.5, 2)))
    informed = np.zeros(network.n, dtype=bool)
    informed[1:4] = True
    trials = 1_000
    rate = np.mean([kit.decay_mask(informed)[0] for _ in range(trials)])
    expected = oracles.decay_success(3, network.max_degree, network.n, 4, 0.5)
    assert oracles.within_band(rate, expected, oracles.binomial_sigma(expected, trials))


def test_geometric_maxima():
    assert oracles.expected_max_geometric(1, 0.25) == pytest.approx(4.0)
    assert oracles.expected_max_geometric(2, 0.5) == pytest.approx(8 / 3)
    assert oracles.max_geometric_pmf(4, 0.5).sum() == pytest.approx(1.0)
    assert oracles.max_geometric_tail(1, 5, 0.3) == pytest.approx(1.0)
    assert oracles.median_max_geometric(1, 0.5) == 1


def test_sum_of_maxima_tail():
    assert oracles.sum_of_maxima_tail(0, 3, 2, 0.5) == pytest.approx(1.0)
    # a single Geometric(1/2): P(Y >= 3) = 1/4
    assert oracles.sum_of_maxima_tail(3, 1, 1, 0.5) == pytest.approx(0.25)


def test_rank_statistics():
    assert oracles.full_rank_probability(1) == pytest.approx(255 / 256)
    assert oracles.expected_draws_to_full_rank(1) == pytest.approx(1.0)
    assert oracles.expected_draws_to_full_rank(2) == pytest.approx(1 + (1 - 256**-2) / (1 - 1 / 256))
    assert 0 < oracles.expected_extra_draws(64) < 0.01


def test_binomial_band():
    sigma = oracles.binomial_sigma(0.5, 100)
    assert sigma == pytest.approx(0.05)
    assert oracles.within_band(0.7, 0.5, sigma)
    assert not oracles.within_band(0.71, 0.5, sigma)


def test_coded_packets_decode():
    rng = np.random.default_rng(3)
    messages = coding.as_symbols([b"alpha", b"be", b"gamma!"])
    coefficients = coding.random_coefficients(5, 3, rng)
    packets = coding.encode(coefficients, messages)
    assert coding.rank(coefficients) == 3
    assert np.array_equal(coding.decode(coefficients, packets), messages)


def test_decode_needs_full_rank():
    coefficients = coding.GF([[1, 2], [2, 4]])
    with pytest.raises(ValueError):
        coding.decode(coefficients, coding.GF([[1], [2]]))
    assert coding.rank(coding.GF(np.zeros((0, 2), dtype=np.uint8))) == 0


def test_coefficient_rows_are_never_zero():
    coefficients = coding.random_coefficients(2000, 1, np.random.default_rng(5))
    assert (coefficients.view(np.ndarray) != 0).all()


def test_echelon_skips_dependent_rows():
    echelon = coding.Echelon(3)
    assert echelon.add([1, 2, 3])
    assert not echelon.add([2, 4, 6])
    assert echelon.add([0, 1, 0])
    assert not echelon.full
    assert echelon.add([0, 0, 1])
    assert echelon.full
    assert not echelon.add([7, 7, 7])


@pytest.mark.parametrize("seed", range(6))
def test_echelon_rank_matches_batch_rank(seed):
    rng = np.random.default_rng(seed)
    rows = rng.integers(0, 4, size=(8, 5), dtype=np.uint8)
    rows[3] = rows[1]
    echelon = coding.Echelon(5)
    for k in range(1, len(rows) + 1):
        echelon.add(rows[k - 1])
        assert echelon.rank == coding.rank(coding.GF(rows[:k]))

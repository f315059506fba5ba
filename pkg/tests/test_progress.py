import numpy as np
import pytest

from app.analysis.blaming import measure_blaming_chains
from app.core.engine import run
from app.analysis.oracles import SIGMA_BAND, binomial_sigma
from app.core.graphs import directed_bipartite, random_bounded, star
from app.core.noise import NoiseModel
from app.errors import ConfigurationError, IncompleteHistoryError
from app.protocols.library import DecayBroadcastProtocol, RoundRobinProtocol, StarFloodProtocol
from app.simulators.progress import (
    CompletionTable,
    RoundKind,
    RoundPlan,
    service_bounds,
    simulate_with_progress_detection,
)
from app.simulators.runner import run_simulation


def test_round_plan_of_a_flood(star4, quiet):
    protocol = StarFloodProtocol(star4, 3)
    transcript = run(star4, protocol, protocol.random_inputs(star4, np.random.default_rng(1)), quiet, 3)
    plan = RoundPlan.from_transcript(star4, transcript, 3)

    assert plan.kind[0, 1] == RoundKind.BROADCAST
    assert plan.kind[2, 3] == RoundKind.RECEIVE
    assert plan.sender[2, 3] == 0
    assert plan.need[0, 2] == 4
    assert plan.receivers[0][1] == (1, 2, 3, 4)


def test_faultless_flood_takes_one_round_per_round(star4, quiet):
    report = run_simulation("progress", StarFloodProtocol(star4, 4), star4, quiet)
    assert report.all_verified
    assert report.max_completion_round == 4
    assert report.rounds == 4


def test_noisy_decay_still_verifies():
    network = random_bounded(16, 4, seed=2)
    protocol = DecayBroadcastProtocol(network, 8, seed=2)
    report = run_simulation("progress", protocol, network, NoiseModel(0.3, 2))
    assert report.all_completed
    assert report.all_verified
    assert report.max_completion_round >= 8


def test_noisy_round_robin_verifies(small_random):
    report = run_simulation("progress", RoundRobinProtocol(small_random), small_random, NoiseModel(0.5, 7))
    assert report.all_verified


def test_completion_table_is_monotone(star4):
    report = simulate_with_progress_detection(StarFloodProtocol(star4, 6), star4, NoiseModel(0.4, 3))
    table: CompletionTable = report.extras["completion_table"]
    assert table.complete
    assert (np.diff(table.table[:, 1:8], axis=1) >= 0).all()
    assert [table.table[v, 7] for v in star4.nodes] == report.completion_rounds


def test_tiny_budget_leaves_nodes_behind(star4):
    report = simulate_with_progress_detection(
        StarFloodProtocol(star4, 6), star4, NoiseModel(0.0, 0), round_budget=3
    )
    assert not report.all_completed
    assert report.max_completion_round is None
    assert report.rounds == 3


def test_directed_networks_are_rejected(quiet):
    network = directed_bipartite(2)
    with pytest.raises(ConfigurationError):
        simulate_with_progress_detection(RoundRobinProtocol(network), network, quiet)


def test_blaming_chains_at_zero_noise(star4, quiet):
    report = simulate_with_progress_detection(StarFloodProtocol(star4, 5), star4, quiet)
    chains = measure_blaming_chains(
        report.extras["completion_table"], star4, service_bounds(report, star4, quiet)
    )
    assert chains.holds
    assert chains.longest == 5
    assert chains.max_increment == 1
    assert all(len(chain) == 6 for chain in chains.chains.values())
    assert chains.chains[3][0] == (3, 6)


def test_blaming_chain_needs_a_complete_table(star4):
    report = simulate_with_progress_detection(
        StarFloodProtocol(star4, 4), star4, NoiseModel(0.0, 0), round_budget=1
    )
    with pytest.raises(IncompleteHistoryError):
        measure_blaming_chains(report.extras["completion_table"], star4)


def test_service_delays_are_positive(star4):
    noise = NoiseModel(0.5, 12)
    report = simulate_with_progress_detection(StarFloodProtocol(star4, 4), star4, noise)
    bounds = service_bounds(report, star4, noise)
    assert (bounds.delay[:, 2:6] >= 1).all()
    assert (bounds.hops[0, 2:6] == 3).all()
    assert (bounds.hops[1, 2:6] == 2).all()


@pytest.mark.parametrize("seed", range(4))
def test_oracle_never_credits_a_round_early(seed):
    network = random_bounded(12, 3, seed=seed)
    protocol = DecayBroadcastProtocol(network, 8, seed=seed)
    noise = NoiseModel(0.4, seed)
    report = simulate_with_progress_detection(protocol, network, noise, round_budget=4000)
    assert report.all_completed

    faultless = report.extras["faultless"]
    plan = report.extras["plan"]
    d = report.extras["completion_table"].table
    for v in network.nodes:
        assert report.histories[v] == faultless.history(v)
        for x in range(1, protocol.length + 1):
            if plan.kind[v, x] == RoundKind.RECEIVE:
                assert d[v, x + 1] > d[plan.sender[v, x], x]
            elif plan.kind[v, x] == RoundKind.BROADCAST:
                assert all(d[w, x + 1] <= d[v, x + 1] for w in plan.receivers[v][x])


def test_listening_node_advances_once_per_clear_round():
    # edge: the center sends M_1, the leaf's level moves with each fault-free round
    network = star(1)
    p, seeds = 0.5, range(2000)
    rounds = []
    for seed in seeds:
        report = simulate_with_progress_detection(StarFloodProtocol(network, 1), network, NoiseModel(p, seed), round_budget=200)
        rounds.append(report.completion_rounds[1])

    attempts = sum(rounds)
    frequency = len(rounds) / attempts
    assert frequency >= (1 - p) - SIGMA_BAND * binomial_sigma(1 - p, attempts)
    # Geometric(1/2): mean 2, variance 2
    assert abs(np.mean(rounds) - 2.0) <= SIGMA_BAND * np.sqrt(2.0 / len(rounds))


@pytest.mark.parametrize("seed", range(6))
def test_recurrence_holds_under_noise(seed):
    network = random_bounded(16, 4, seed=seed)
    protocol = DecayBroadcastProtocol(network, 8, seed=seed)
    noise = NoiseModel(0.5, seed)
    report = simulate_with_progress_detection(protocol, network, noise, round_budget=6000)
    assert report.all_completed

    chains = measure_blaming_chains(
        report.extras["completion_table"], network, service_bounds(report, network, noise)
    )
    assert chains.holds
    assert chains.max_increment >= 1

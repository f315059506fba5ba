import numpy as np
import pytest

from app.config import DEFAULT_CONSTANTS
from app.core.engine import Channel, run
from app.core.graphs import path, random_bounded, star
from app.core.noise import NoiseModel
from app.errors import NotStaticError, WindowError
from app.protocols.library import DecayBroadcastProtocol, RoundRobinProtocol, StarFloodProtocol
from app.simulators.primitives import (
    DistanceLabel,
    LearnDelaysTrace,
    PrimitiveKit,
    broadcast_decay,
    dist_to_active,
    learn_delays,
)
from app.simulators.runner import run_simulation
from app.simulators.static import main_static, static_lengths
from app.utils import learn_delays_iterations, window_size
from tests.test_protocols import _InputTimed


def _oracle_kit(network):
    return PrimitiveKit(Channel(network, NoiseModel()), DEFAULT_CONSTANTS, oracle=True)


def test_dist_to_active_on_a_path():
    network = path(5)
    active = np.array([True, False, False, False, False])
    labels = dist_to_active(_oracle_kit(network), active)
    assert labels == [DistanceLabel.ZERO, DistanceLabel.ONE, DistanceLabel.TWO, DistanceLabel.FAR, DistanceLabel.FAR]


def test_oracle_primitives_still_consume_rounds(path3):
    kit = _oracle_kit(path3)
    broadcast_decay(kit, np.array([False, True, False]), b"p")
    assert kit.channel.round == kit.decay_rounds


def test_noisy_broadcast_reaches_only_neighbours(star4):
    kit = PrimitiveKit(Channel(star4, NoiseModel(0.2, 3)))
    heard = broadcast_decay(kit, np.array([True, False, False, False, False]), b"p")
    assert heard[0] is None
    assert set(heard[1:]) <= {b"p", None}


def test_learn_delays_hand_example(path3):
    m = learn_delays(_oracle_kit(path3), np.array([4, 6, 5]), throttle=7, window=7)
    assert m.tolist() == [4, 4, 5]


def test_learn_delays_finds_neighbourhood_minimum():
    network = random_bounded(24, 4, seed=6)
    rng = np.random.default_rng(6)
    window = window_size(network.n, 8)
    throttle = window + 10
    t = rng.integers(throttle - window, throttle + 1, size=network.n)

    m = learn_delays(_oracle_kit(network), t, throttle, window)
    for v in network.nodes:
        if all(t[v] <= t[w] for w in network.ball(v, 2)):
            assert all(m[w] == t[v] for w in network.ball(v, 1))


def test_learn_delays_trace_has_one_step_per_iteration(path3):
    trace = LearnDelaysTrace()
    learn_delays(_oracle_kit(path3), np.array([2, 3, 3]), throttle=3, window=3, trace=trace)
    assert len(trace.steps) == learn_delays_iterations(3)
    assert set(trace.steps[0]) == {"lo", "hi", "mid", "active", "silent", "codes"}


def test_learn_delays_window_is_checked_in_oracle_mode(path3):
    with pytest.raises(WindowError):
        learn_delays(_oracle_kit(path3), np.array([1, 9, 9]), throttle=9, window=4)


def test_faultless_static_flood(star4, quiet):
    report = run_simulation("static", StarFloodProtocol(star4, 4), star4, quiet)
    assert report.all_verified
    assert report.extras["window"] == window_size(5, DEFAULT_CONSTANTS.cQ)
    assert report.extras["window_violations"] == 0


def test_oracle_mode_static_round_robin():
    network = path(6)
    report = run_simulation("static", RoundRobinProtocol(network), network, NoiseModel(0.0, 2), oracle_mode=True)
    assert report.all_verified


def test_noisy_static_flood():
    network = star(8)
    report = run_simulation("static", StarFloodProtocol(network, 8), network, NoiseModel(0.3, 5))
    assert report.all_verified


def test_static_lengths(star4):
    lengths = static_lengths(star4, 10, DEFAULT_CONSTANTS)
    assert lengths["window"] == 16
    assert lengths["outer"] == 26
    assert lengths["inner"] == 8


def test_zero_attempts_never_complete(star4, quiet):
    constants = DEFAULT_CONSTANTS.override(c1=0)
    report = run_simulation("static", StarFloodProtocol(star4, 3), star4, quiet, constants=constants)
    assert not report.all_completed
    assert not report.all_verified


def test_traces_are_collected_on_request(path3, quiet):
    report = main_static(RoundRobinProtocol(path3), path3, quiet, trace_learn_delays=True)
    assert report.extras["learn_delays_traces"]


def test_static_simulator_rejects_input_dependent_protocols(path3, quiet):
    with pytest.raises(NotStaticError):
        main_static(_InputTimed(), path3, quiet)


@pytest.mark.parametrize("seed", range(4))
def test_virtual_rounds_stay_within_the_window(seed):
    network = random_bounded(16, 4, seed=seed)
    protocol = DecayBroadcastProtocol(network, 8, seed=seed)
    report = run_simulation("static", protocol, network, NoiseModel(0.3, seed))
    assert report.all_verified
    assert report.extras["max_window_spread"] <= report.extras["window"]
    assert report.extras["window_violations"] == 0


def _locally_most_delayed(network, t):
    return [v for v in network.nodes if all(t[v] <= t[w] for w in network.ball(v, 2))]


@pytest.mark.parametrize("seed", range(25))
def test_learn_delays_search_properties(seed):
    rng = np.random.default_rng(seed)
    network = random_bounded(int(rng.integers(6, 20)), int(rng.integers(2, 5)), seed=seed)
    window = int(rng.integers(3, 20))
    throttle = window + 5
    t = rng.integers(throttle - window, throttle + 1, size=network.n)
    trace = LearnDelaysTrace()
    m = learn_delays(_oracle_kit(network), t, throttle, window, trace)

    steps = trace.steps
    for u in network.nodes:
        silenced = next((i for i, s in enumerate(steps) if s["silent"][u]), None)
        if silenced is not None:
            assert not any(s["active"][u] for s in steps[silenced + 1:])

    for v in _locally_most_delayed(network, t):
        tv = t[v]
        assert not any(s["silent"][v] for s in steps)
        for w in network.ball(v, 1):
            assert all(s["lo"][w] <= tv <= s["hi"][w] for s in steps)
            assert m[w] == tv
        for w in network.ball(v, 2) - network.ball(v, 1):
            deviated = next((i for i, s in enumerate(steps) if not s["lo"][w] <= tv <= s["hi"][w]), None)
            if deviated is not None:
                assert not any(s["active"][w] for s in steps[deviated + 1:])


def test_learn_delays_on_a_line_with_two_minimal_ends():
    network = path(7)
    t = np.array([1, 5, 6, 7, 6, 4, 2])
    trace = LearnDelaysTrace()
    m = learn_delays(_oracle_kit(network), t, throttle=7, window=7, trace=trace)

    assert m.tolist() == [1, 1, 7, 7, 7, 2, 2]
    assert [np.flatnonzero(s["active"]).tolist() for s in trace.steps] == [[0, 6], [0], [6]]
    assert [np.flatnonzero(s["silent"]).tolist() for s in trace.steps] == [[2, 4]] * 3


@pytest.mark.parametrize("seed", range(4))
def test_faultless_static_run_matches_the_protocol_exactly(seed):
    network = random_bounded(14, 4, seed=seed)
    protocol = DecayBroadcastProtocol(network, 10, seed=seed)
    inputs = protocol.random_inputs(network, np.random.default_rng(seed))
    report = main_static(protocol, network, NoiseModel(0.0, seed), inputs)

    faultless = run(network, protocol, inputs, NoiseModel(), 10)
    assert report.all_completed
    assert report.histories == [faultless.history(v) for v in network.nodes]

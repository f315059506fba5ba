import numpy as np
import pytest

from app.core.engine import LISTEN, History, NodeAction
from app.core.graphs import bipartite_hard, cycle, path, random_bounded, star
from app.errors import ConfigurationError, NotStaticError, ScheduleMismatchError
from app.core.network import Network
from app.protocols import (
    DecayBroadcastProtocol,
    RadioProtocol,
    RoundRobinProtocol,
    ScheduleCursor,
    SilentProtocol,
    StarFloodProtocol,
    StaticProtocol,
    StaticSchedule,
    as_static,
    decay_decision,
    decay_round,
    derive_static_schedule,
    make_protocol,
)
from app.repositories.schedule_repo import read_schedule, write_schedule
from app.schemas.specs import ProtocolSpec


def test_decay_decision_thresholds():
    assert decay_decision(True, 1, 0.49)
    assert not decay_decision(True, 1, 0.5)
    assert decay_decision(True, 3, 0.12)
    assert not decay_decision(True, 3, 0.13)
    assert not decay_decision(False, 1, 0.0)
    with pytest.raises(ValueError):
        decay_decision(True, 0, 0.1)


def test_decay_round_sends_the_payload():
    class Fixed:
        def random(self):
            return 0.1

    assert decay_round(0, True, 1, Fixed(), b"hi") == NodeAction.broadcast(b"hi")
    assert decay_round(0, False, 1, Fixed(), b"hi") is LISTEN


def test_flood_requires_a_star():
    with pytest.raises(ConfigurationError):
        StarFloodProtocol(path(4), 3)
    with pytest.raises(ConfigurationError):
        StarFloodProtocol(Network.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2)]), 3)


def test_flood_schedule(star4):
    schedule = derive_static_schedule(StarFloodProtocol(star4, 5), star4)
    assert schedule.rounds[0] == ()
    assert all(schedule.rounds[v] == (1, 2, 3, 4, 5) for v in range(1, 5))


def test_round_robin_cycles_through_nodes():
    network = cycle(4)
    protocol = RoundRobinProtocol(network, 6)
    history = History(b"me")
    assert protocol.action(1, 2, history) == NodeAction.broadcast(b"me")
    assert protocol.action(1, 6, history) == NodeAction.broadcast(b"me")
    assert protocol.action(2, 2, history) is LISTEN

    schedule = derive_static_schedule(protocol, network)
    assert schedule.rounds[0] == (2, 4, 6)


def test_round_robin_defaults_to_one_turn_each():
    assert RoundRobinProtocol(path(5)).length == 5


def test_round_robin_plan_must_be_collision_free():
    bad = Network.from_edges(3, [(0, 2), (1, 2)], plan=((0, 1),))
    with pytest.raises(ScheduleMismatchError):
        RoundRobinProtocol(bad)


def test_round_robin_plan_length_limit():
    network = Network.from_edges(2, [(0, 1)], plan=((0,),))
    with pytest.raises(ConfigurationError):
        RoundRobinProtocol(network, 3)


def test_decay_protocol_is_static_with_public_coins():
    assert DecayBroadcastProtocol(star(4), 8).phase == 2
    network = random_bounded(12, 3, seed=1)
    protocol = DecayBroadcastProtocol(network, 12, seed=4)
    schedule = derive_static_schedule(protocol, network, trials=3, seed=9)
    assert schedule.length == 12


class _InputTimed(RadioProtocol):
    """Node 0 speaks in the rounds whose bit is set in its input."""

    length = 64

    def action(self, v, t, history):
        if v == 0 and int.from_bytes(history.private_input, "big") >> (t - 1) & 1:
            return NodeAction.broadcast(b"x")
        return LISTEN


def test_input_dependent_schedules_are_rejected(path3):
    with pytest.raises(NotStaticError):
        derive_static_schedule(_InputTimed(), path3, trials=2, seed=1)


def test_as_static_wraps_once(star4):
    static = as_static(StarFloodProtocol(star4, 2), star4)
    assert isinstance(static, StaticProtocol)
    assert static.is_static
    assert as_static(static, star4) is static


def test_schedule_validation():
    with pytest.raises(ValueError):
        StaticSchedule(3, ((2, 1),))
    with pytest.raises(ValueError):
        StaticSchedule(3, ((4,),))


def test_cursor_walks_the_schedule():
    cursor = ScheduleCursor((2, 5), sentinel=7)
    assert cursor.next_round == 2
    with pytest.raises(ValueError):
        cursor.fulfill(5)
    cursor.fulfill(2)
    cursor.fulfill(5)
    assert cursor.exhausted
    assert cursor.fulfilled == 2
    assert cursor.next_round == 7


def test_schedule_file_round_trip(tmp_path, star4):
    schedule = derive_static_schedule(StarFloodProtocol(star4, 3), star4)
    write_schedule(schedule, tmp_path / "s.jsonl")
    assert read_schedule(tmp_path / "s.jsonl", 3) == schedule


def test_make_protocol(star4):
    assert isinstance(make_protocol(ProtocolSpec(kind="silent", T=3), star4), SilentProtocol)
    assert make_protocol(ProtocolSpec(kind="flood", T=3), star4).length == 3
    assert make_protocol(ProtocolSpec(kind="roundrobin"), star4).length == 5
    with pytest.raises(ConfigurationError):
        make_protocol(ProtocolSpec(kind="decay"), star4)


def test_random_inputs_shape(star4):
    rng = np.random.default_rng(0)
    inputs = StarFloodProtocol(star4, 3).random_inputs(star4, rng)
    assert len(inputs) == 5
    assert len(inputs[0]) == 3
    assert inputs[1] == ()


def test_silent_protocol_has_empty_schedules(star4):
    schedule = derive_static_schedule(SilentProtocol(4), star4)
    assert all(rounds == () for rounds in schedule.rounds)


def test_hard_instance_right_nodes_receive_every_round():
    network = bipartite_hard(9, 3, seed=5)
    schedule = derive_static_schedule(RoundRobinProtocol(network), network)
    assert all(len(schedule.rounds[r]) == 3 for r in range(9, 18))


def test_schedule_is_a_fixed_point(small_random):
    protocol = RoundRobinProtocol(small_random)
    first = derive_static_schedule(protocol, small_random, seed=1)
    assert derive_static_schedule(protocol, small_random, seed=2) == first

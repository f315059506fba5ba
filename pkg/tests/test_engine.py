import numpy as np
import pytest

from app.core.engine import (
    LISTEN,
    ActionKind,
    Channel,
    History,
    NodeAction,
    deliver,
    run,
    step,
    verify_simulation,
)
from app.core.noise import NoiseModel, RandomStream
from app.errors import ConfigurationError, ParameterError, ProtocolError
from app.protocols.library import StarFloodProtocol
from app.protocols.base import RadioProtocol


def test_single_sender_reaches_its_neighbours_only(path3):
    assert deliver(path3, [b"a", None, None], [False] * 3) == [None, b"a", None]


def test_two_senders_collide_without_detection(path3):
    assert deliver(path3, [b"a", None, b"c"], [False] * 3) == [None, None, None]


def test_broadcaster_hears_nothing(path3):
    assert deliver(path3, [b"a", b"b", None], [False] * 3) == [None, None, b"b"]


def test_fault_drops_the_reception(path3):
    assert deliver(path3, [b"a", None, None], [False, True, False]) == [None, None, None]


def test_deliver_rejects_wrong_lengths(path3):
    with pytest.raises(ConfigurationError):
        deliver(path3, [None, None], [False] * 3)


def test_step_uses_broadcast_payloads(path3):
    actions = [LISTEN, NodeAction.broadcast(b"m"), LISTEN]
    assert step(path3, actions, [False] * 3) == [b"m", None, b"m"]


def test_listen_action_cannot_carry_payload():
    with pytest.raises(ValueError):
        NodeAction(ActionKind.LISTEN, b"x")
    with pytest.raises(ValueError):
        NodeAction(ActionKind.BROADCAST, None)


def test_history_before_is_strict():
    events = [(1, b"a"), (3, b"b"), (4, b"c")]
    assert History.before(None, events, 3).events == ((1, b"a"),)
    assert History.before(None, events, 5).events == tuple(events)
    assert not History.before(None, events, 1).heard_anything


def test_faultless_flood_reaches_every_leaf(star4, quiet):
    protocol = StarFloodProtocol(star4, 3)
    messages = [b"m1", b"m2", b"m3"]
    transcript = run(star4, protocol, StarFloodProtocol.inputs_for(star4, messages), quiet, 3)

    assert transcript.rounds == 3
    assert transcript.history(0) == []
    for leaf in range(1, 5):
        assert transcript.history(leaf) == [(1, b"m1"), (2, b"m2"), (3, b"m3")]


def test_rounds_past_the_protocol_are_silent(star4, quiet):
    protocol = StarFloodProtocol(star4, 2)
    transcript = run(star4, protocol, protocol.random_inputs(star4, np.random.default_rng(0)), quiet, 5)
    assert transcript.rounds == 5
    assert all(not a.is_broadcast for a in transcript.actions[4])
    assert transcript.receive_rounds(1) == [1, 2]


class _Oversized(RadioProtocol):
    length = 1

    def action(self, v, t, history):
        return NodeAction.broadcast(b"x" * 65) if v == 0 else LISTEN


class _Crashing(RadioProtocol):
    length = 2

    def action(self, v, t, history):
        if t == 2:
            raise KeyError("boom")
        return LISTEN


def test_payload_cap_is_enforced(path3, quiet):
    with pytest.raises(ProtocolError) as info:
        run(path3, _Oversized(), [b""] * 3, quiet, 1)
    assert info.value.round_index == 1
    assert info.value.node == 0


def test_protocol_failures_carry_the_round(path3, quiet):
    with pytest.raises(ProtocolError) as info:
        run(path3, _Crashing(), [b""] * 3, quiet, 2)
    assert info.value.round_index == 2


def test_run_checks_input_count(path3, quiet):
    with pytest.raises(ConfigurationError):
        run(path3, _Crashing(), [b""], quiet, 1)


def test_verify_simulation_flags_divergent_nodes(star4, quiet):
    protocol = StarFloodProtocol(star4, 2)
    transcript = run(star4, protocol, StarFloodProtocol.inputs_for(star4, [b"a", b"b"]), quiet, 2)
    claimed = [transcript.history(v) for v in star4.nodes]
    claimed[2] = [(1, b"a")]
    assert verify_simulation(transcript, claimed) == [True, True, False, True, True]


# --------------------------------------------------
# CHANNEL
# --------------------------------------------------
def test_block_delivery_matches_round_by_round(small_random):
    noise = NoiseModel(0.4, 11)
    rng = np.random.default_rng(5)
    mask = rng.random((40, small_random.n)) < 0.2

    block = Channel(small_random, noise)
    received, senders = block.peek_block(mask, with_senders=True)
    assert block.round == 0

    single = Channel(small_random, noise)
    for r in range(40):
        frames = [v if mask[r, v] else None for v in small_random.nodes]
        got = single.transmit(frames)
        assert [g is not None for g in got] == received[r].tolist()
        for v, g in enumerate(got):
            if g is not None:
                assert senders[r, v] == g

    block.deliver_block(mask)
    assert block.round == single.round == 40


def test_advance_skips_rounds(path3):
    channel = Channel(path3, NoiseModel(0.5, 2))
    channel.advance(7)
    expected = channel.faults(8, 1)[0]
    channel.transmit([None] * 3)
    assert channel.round == 8
    assert (channel.last_faults == expected).all()


# --------------------------------------------------
# RANDOMNESS
# --------------------------------------------------
def test_draws_do_not_depend_on_request_order():
    whole = RandomStream(42, 0, 5).uniforms(1, 600)
    late = RandomStream(42, 0, 5).uniforms(250, 300)
    assert np.array_equal(whole[249:549], late)
    assert np.array_equal(RandomStream(42, 0, 5).row(513), whole[512])


def test_streams_are_independent():
    a = RandomStream(42, 0, 4).uniforms(1, 10)
    b = RandomStream(42, 1, 4).uniforms(1, 10)
    c = RandomStream(43, 0, 4).uniforms(1, 10)
    assert not np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_noise_model_validates_its_parameters():
    with pytest.raises(ParameterError):
        NoiseModel(1.0, 0)
    with pytest.raises(ParameterError):
        NoiseModel(-0.1, 0)
    with pytest.raises(ParameterError):
        NoiseModel(0.1, -1)
    with pytest.raises(ParameterError):
        RandomStream(0, 0, 3).uniforms(0, 1)


def test_zero_noise_never_faults():
    assert not NoiseModel(0.0, 9).fault_stream(8).faults(1, 100).any()


def test_fault_rate_tracks_p():
    rate = NoiseModel(0.3, 4).fault_stream(50).faults(1, 400).mean()
    assert abs(rate - 0.3) < 0.02

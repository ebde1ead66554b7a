import itertools
from collections import Counter

import numpy as np
import pytest

from tempassume.commit import BitTape, TrustedPartyCommitment
from tempassume.errors import CircuitInvalid, OtAborted, ParseError
from tempassume.network import Network
from tempassume.mpc import (
    AND2,
    FULL_ADDER,
    MAJORITY3,
    Bb84OT,
    IdealOT,
    OtChannels,
    eval_plain,
    format_circuit,
    gmw_eval,
    ot4_from_ot2,
    ot_reverse,
    parse_circuit,
    random_circuit,
)


def _assignments(circuit):
    wires = [w for _, w in circuit.inputs]
    for bits in itertools.product((0, 1), repeat=len(wires)):
        yield dict(zip(wires, bits))


def test_ot_reverse_delivers_chosen_input():
    rng = np.random.default_rng(0)
    for y0, y1, c in itertools.product((0, 1), repeat=3):
        backend = IdealOT()
        result = ot_reverse(backend, 0, 1, y0, y1, c, rng)
        assert result.output == (y0, y1)[c]
        assert backend.calls == 1


def test_ot4_from_three_ot2():
    rng = np.random.default_rng(1)
    for messages in itertools.product((0, 1), repeat=4):
        for c1, c2 in itertools.product((0, 1), repeat=2):
            backend = IdealOT()
            assert ot4_from_ot2(backend, 0, 1, messages, (c1, c2), rng) == messages[2 * c1 + c2]
            assert backend.calls == 3


@pytest.mark.parametrize("circuit", [AND2, MAJORITY3, FULL_ADDER], ids=["and2", "majority3", "full-adder"])
def test_gmw_matches_plain_evaluation(circuit):
    for seed, inputs in enumerate(_assignments(circuit)):
        result = gmw_eval(circuit, inputs, seed=seed)
        assert result.outputs == eval_plain(circuit, inputs)


def test_gmw_on_random_circuits():
    rng = np.random.default_rng(5)
    for trial in range(50):
        circuit = random_circuit(rng, players=3, gates=6)
        for inputs in _assignments(circuit):
            assert gmw_eval(circuit, inputs, seed=trial).outputs == eval_plain(circuit, inputs)


def test_gmw_cost_accounting():
    result = gmw_eval(MAJORITY3, {"a": 1, "b": 1, "c": 0})
    assert result.outputs == (1,)
    assert result.and_gates == 3
    # three player pairs per AND gate, three 1-out-of-2 OTs per pair
    assert result.ot_calls == 27
    assert result.reversed_ots == 0


def test_orientation_reverses_transfers_into_maximal_set():
    result = gmw_eval(MAJORITY3, {"a": 0, "b": 1, "c": 1}, orientation=0b100)
    assert result.outputs == (1,)
    assert result.reversed_ots == 18


def test_player_view_excludes_other_private_messages():
    result = gmw_eval(AND2, {"a": 1, "b": 0}, players=3)
    view = result.view(2)
    assert all(src == 2 or dst in (None, 2) for _, src, dst, _, _ in view)


def test_gmw_over_bb84_ot():
    backend = Bb84OT(seed=3, backend=TrustedPartyCommitment())
    result = gmw_eval(AND2, {"a": 1, "b": 1}, backend)
    assert result.outputs == (1,)
    assert backend.calls == 3


def test_bb84_ot_abort_surfaces():
    backend = Bb84OT(seed=0, n=32, backend=TrustedPartyCommitment())
    with pytest.raises(OtAborted) as exc:
        backend.transfer(0, 1, 1, 0, 1)
    assert exc.value.reason == "abort-too-few-good"


def test_parse_and_format_circuit():
    assert parse_circuit(format_circuit(MAJORITY3)) == MAJORITY3
    circuit = parse_circuit("in 0 a  # owner 0\nin 1 b\ngate NOT na a\ngate xor z na b\nout z\n")
    assert eval_plain(circuit, {"a": 0, "b": 0}) == (1,)


@pytest.mark.parametrize(
    "text, error",
    [
        ("in x a\nout a\n", ParseError),
        ("in 0 a\nwire a\n", ParseError),
        ("in 0 a\nin 1 b\ngate OR z a b\nout z\n", CircuitInvalid),
        ("in 0 a\ngate AND z a b\nout z\n", CircuitInvalid),
        ("in 0 a\ngate NOT z a a\nout z\n", CircuitInvalid),
        ("in 0 a\nin 1 a\nout a\n", CircuitInvalid),
        ("in 0 a\n", CircuitInvalid),
    ],
)
def test_circuit_errors(text, error):
    with pytest.raises(error):
        parse_circuit(text)


def test_parse_error_carries_line_number():
    with pytest.raises(ParseError) as exc:
        parse_circuit("in 0 a\n\nbogus line\n")
    assert exc.value.line == 3


def test_missing_input_value():
    with pytest.raises(CircuitInvalid):
        eval_plain(AND2, {"a": 1})
    with pytest.raises(CircuitInvalid):
        gmw_eval(AND2, {"b": 1})


def test_ot_reverse_views_hide_the_other_party_input():
    def runs(y0, y1, c):
        return [ot_reverse(IdealOT(), 0, 1, y0, y1, c, BitTape(r)) for r in (0, 1)]

    for y0, y1 in itertools.product((0, 1), repeat=2):
        sender = [Counter(t.sender_view for t in runs(y0, y1, c)) for c in (0, 1)]
        assert sender[0] == sender[1]
    for c, chosen in itertools.product((0, 1), repeat=2):
        pairs = [(y0, y1) for y0, y1 in itertools.product((0, 1), repeat=2) if (y0, y1)[c] == chosen]
        receiver = [Counter(t.receiver_view for t in runs(y0, y1, c)) for y0, y1 in pairs]
        assert receiver[0] == receiver[1]


def _ot4_views(messages, choice, tape):
    net = Network(2, phase="ot")
    channels = OtChannels(IdealOT(), network=net)
    ot4_from_ot2(channels, 0, 1, messages, choice, BitTape(tape))
    return net.view(0b01), net.view(0b10)


def test_ot4_sender_view_is_independent_of_choice():
    messages = (1, 0, 0, 1)
    for tape in range(4):
        views = {_ot4_views(messages, choice, tape)[0] for choice in itertools.product((0, 1), repeat=2)}
        assert len(views) == 1


def test_ot4_receiver_view_depends_only_on_chosen_message():
    for choice in itertools.product((0, 1), repeat=2):
        index = 2 * choice[0] + choice[1]
        by_chosen = {}
        for messages in itertools.product((0, 1), repeat=4):
            dist = Counter(_ot4_views(messages, choice, tape)[1] for tape in range(4))
            by_chosen.setdefault(messages[index], []).append(dist)
        for dists in by_chosen.values():
            assert all(d == dists[0] for d in dists)


def _and_views(player, inputs):
    counter = BitTape()
    gmw_eval(AND2, inputs, rng=counter)
    return Counter(gmw_eval(AND2, inputs, rng=BitTape(t)).view(player) for t in range(1 << counter.pos))


@pytest.mark.parametrize("player, own, other", [(0, "a", "b"), (1, "b", "a")])
def test_and_view_is_independent_of_the_other_input_given_the_output(player, own, other):
    # own input 0 fixes the output at 0, so the other input must stay hidden
    views = [_and_views(player, {own: 0, other: x}) for x in (0, 1)]
    assert views[0] == views[1]
    # own input 1 reveals the other input through the output
    views = [_and_views(player, {own: 1, other: x}) for x in (0, 1)]
    assert views[0] != views[1]


def test_reversed_ot_aborts_with_its_backing_ot():
    backend = Bb84OT(seed=0, n=32, backend=TrustedPartyCommitment())
    with pytest.raises(OtAborted) as exc:
        ot_reverse(backend, 0, 1, 1, 0, 1, np.random.default_rng(0))
    assert exc.value.reason == "abort-too-few-good"

    channels = OtChannels(Bb84OT(seed=1, n=32, backend=TrustedPartyCommitment()), orientation=0b10, rng=np.random.default_rng(0))
    with pytest.raises(OtAborted):
        channels.transfer(0, 1, 1, 0, 1)
    assert channels.reversed == 1

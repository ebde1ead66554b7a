from collections import Counter

import numpy as np
import pytest

from tempassume.commit import BitTape
from tempassume.errors import DegenerateAccess, Inconsistent, Mismatch, NotQualified
from tempassume.sharing import (
    ChallengeSource,
    DealerBehavior,
    bits_from_int,
    bits_to_int,
    corrupt_copy,
    deal,
    reconstruct,
    serialize_bundle,
    vss_deal,
    xor_combine,
)
from tempassume.structures import (
    MonotoneFamily,
    contains,
    dual_access,
    max_unqualified,
    parse_structure,
    players_of,
    threshold_structure,
)


@pytest.fixture
def access():
    return dual_access(threshold_structure(3, 1))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def test_bits_from_int_is_little_endian():
    assert bits_from_int(6, 4).tolist() == [0, 1, 1, 0]
    assert bits_to_int(bits_from_int(11, 5)) == 11


def test_holders_are_players_outside_tag(access, rng):
    bundle = deal(bits_from_int(5, 3), access, rng)
    assert bundle.tags == (0b001, 0b010, 0b100)
    assert bundle.holders(0b010) == (0, 2)
    assert set(bundle.copies[0]) == {0b010, 0b100}
    assert np.array_equal(bundle.secret(), bits_from_int(5, 3))


def test_every_qualified_set_reconstructs(rng):
    a = parse_structure("sets(4; 0 1, 2, 3)")
    z = dual_access(a)
    secret = bits_from_int(0b1011, 4)
    bundle = deal(secret, z, rng)
    for coalition in range(1, 1 << 4):
        if contains(z, coalition):
            assert np.array_equal(reconstruct(bundle, coalition), secret)
        else:
            with pytest.raises(NotQualified):
                reconstruct(bundle, coalition)


def test_unqualified_reports_missing_tag(access, rng):
    bundle = deal(bits_from_int(1, 1), access, rng)
    with pytest.raises(NotQualified) as exc:
        reconstruct(bundle, 0b001)
    assert exc.value.missing_tag == 0b001


def test_inconsistent_copies_are_detected(access, rng):
    bundle = deal(bits_from_int(1, 1), access, rng)
    corrupt_copy(bundle, 0, 0b010)
    assert not bundle.is_consistent()
    with pytest.raises(Inconsistent) as exc:
        reconstruct(bundle, 0b101)
    assert exc.value.tag == 0b010


def test_degenerate_access():
    with pytest.raises(DegenerateAccess):
        deal(bits_from_int(1, 1), MonotoneFamily.upward(3, [0]), np.random.default_rng(0))


def test_xor_combine_shares_the_xor(access, rng):
    s1, s2 = bits_from_int(0b1100, 4), bits_from_int(0b1010, 4)
    combined = xor_combine(deal(s1, access, rng), deal(s2, access, rng))
    assert np.array_equal(reconstruct(combined, 0b011), s1 ^ s2)


def test_xor_combine_on_random_instances(rng):
    for _ in range(30):
        n = int(rng.integers(2, 7))
        z = dual_access(threshold_structure(n, int(rng.integers(0, (n + 1) // 2))))
        length = int(rng.integers(1, 9))
        s1, s2 = rng.integers(0, 2, size=(2, length), dtype=np.uint8)
        combined = xor_combine(deal(s1, z, rng), deal(s2, z, rng))
        for coalition in range(1 << n):
            if contains(z, coalition):
                assert np.array_equal(reconstruct(combined, coalition), s1 ^ s2)


def test_xor_combine_mismatch(access, rng):
    with pytest.raises(Mismatch):
        xor_combine(deal(bits_from_int(1, 1), access, rng), deal(bits_from_int(1, 2), access, rng))


def test_serialize_bundle_lists_replicas_and_holdings(access, rng):
    text = serialize_bundle(deal(bits_from_int(1, 1), access, rng))
    lines = text.splitlines()
    assert sum(line.startswith("replica ") for line in lines) == 3
    assert sum(line.startswith("holds ") for line in lines) == 6


def test_honest_dealer_always_accepted(access):
    for seed in range(20):
        rng = np.random.default_rng(seed)
        _, transcript, verdict = vss_deal(bits_from_int(seed, 4), access, 8, rng)
        assert verdict.accepted
        assert len(transcript.rounds) == 8
        assert transcript.challenge_source is ChallengeSource.PUBLIC_COIN


def test_misdealing_dealer_rejected_by_victim(access):
    dealer = DealerBehavior.misdealing((1, 0b100))
    _, transcript, verdict = vss_deal(
        bits_from_int(1, 1), access, 40, np.random.default_rng(3),
        dealer=dealer, verifier_rng=np.random.default_rng(4),
    )
    assert not verdict.accepted
    assert verdict.complainers == 0b010
    assert transcript.rounds[verdict.round].challenge == 1
    assert transcript.challenge_source is ChallengeSource.VERIFIER


def _copies_seen(bundle, coalition):
    return tuple((p, tag, int(v[0])) for p in players_of(coalition) for tag, v in sorted(bundle.copies[p].items()))


@pytest.mark.parametrize(
    "adversary",
    [
        threshold_structure(2, 0),
        threshold_structure(3, 1),
        threshold_structure(4, 1),
        threshold_structure(4, 2),
        parse_structure("sets(4; 0 1, 2 3)"),
        parse_structure("sets(4; 0 1, 1 2, 3)"),
    ],
)
def test_unqualified_views_do_not_depend_on_secret(adversary):
    z = dual_access(adversary)
    width = len(max_unqualified(z)) - 1
    for coalition in range(1 << z.n):
        if contains(z, coalition):
            continue
        views = [
            Counter(_copies_seen(deal(bits_from_int(s, 1), z, BitTape(t)), coalition) for t in range(1 << width))
            for s in (0, 1)
        ]
        assert views[0] == views[1]

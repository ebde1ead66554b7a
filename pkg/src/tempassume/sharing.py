"""Replicated secret sharing over XOR and cut-and-choose verifiable sharing.

A secret is split into one replica per maximal unqualified set T of the
access structure; the replica tagged T is handed to every player outside T.
A coalition reconstructs iff it holds every tag, which happens exactly when it
is contained in no maximal unqualified set, i.e. when it is qualified.
"""

import logging
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from enum import Enum
from typing import Protocol

import numpy as np

from .errors import DegenerateAccess, Inconsistent, Mismatch, NotQualified
from .structures import Kind, MonotoneFamily, PlayerSet, format_set, max_unqualified, players_of

logger = logging.getLogger(__name__)

DEFAULT_SECRET_LEN = 1
PAYLOAD_SECRET_LEN = 32
DEFAULT_VSS_ROUNDS = 8

Bits = np.ndarray


class RandomSource(Protocol):
    def integers(self, low, high=None, size=None, dtype=np.int64): ...


def random_bits(rng: RandomSource, length: int) -> Bits:
    return np.asarray(rng.integers(0, 2, size=length, dtype=np.uint8), dtype=np.uint8)


def random_bit(rng: RandomSource) -> int:
    return int(random_bits(rng, 1)[0])


def bits_from_int(value: int, length: int) -> Bits:
    """Little-endian bit vector of `value` (bit i is (value >> i) & 1)."""
    return np.array([(value >> i) & 1 for i in range(length)], dtype=np.uint8)


def bits_to_int(bits: Bits) -> int:
    return sum(int(b) << i for i, b in enumerate(bits))


def bits_to_hex(bits: Bits) -> str:
    return np.packbits(bits, bitorder="little").tobytes().hex()


def encode_bits(bits: Bits) -> bytes:
    return len(bits).to_bytes(4, "big") + np.packbits(bits, bitorder="little").tobytes()


@dataclass(eq=False)
class ShareBundle:
    """A dealt secret: intended replica values plus every player's copies.

    `copies[p]` maps each tag T with p not in T to p's copy. An honest dealer
    hands out copies equal to `replicas`; a cheating one may not.
    """

    access: MonotoneFamily
    secret_len: int
    replicas: dict[PlayerSet, Bits]
    copies: dict[int, dict[PlayerSet, Bits]]

    @property
    def n(self) -> int:
        return self.access.n

    @property
    def tags(self) -> tuple[PlayerSet, ...]:
        return tuple(self.replicas)

    def holders(self, tag: PlayerSet) -> tuple[int, ...]:
        return tuple(p for p in range(self.n) if not (tag >> p) & 1)

    def tags_held_by(self, coalition: PlayerSet) -> set[PlayerSet]:
        return {t for t in self.tags if coalition & ~t}

    def secret(self) -> Bits:
        out = np.zeros(self.secret_len, dtype=np.uint8)
        for value in self.replicas.values():
            out ^= value
        return out

    def is_consistent(self) -> bool:
        return all(
            np.array_equal(copy, self.replicas[tag])
            for held in self.copies.values()
            for tag, copy in held.items()
        )


def deal(secret: Bits, access: MonotoneFamily, rng: RandomSource) -> ShareBundle:
    if access.kind is not Kind.UPWARD:
        raise ValueError("deal expects an access structure (upward family)")
    tags = max_unqualified(access)
    if not tags:
        raise DegenerateAccess("the empty set is qualified; every coalition knows the secret")
    secret = np.asarray(secret, dtype=np.uint8)
    replicas: dict[PlayerSet, Bits] = {}
    acc = np.zeros(len(secret), dtype=np.uint8)
    for tag in tags[:-1]:
        value = random_bits(rng, len(secret))
        replicas[tag] = value
        acc ^= value
    replicas[tags[-1]] = secret ^ acc
    copies = {
        p: {t: v.copy() for t, v in replicas.items() if not (t >> p) & 1}
        for p in range(access.n)
    }
    return ShareBundle(access=access, secret_len=len(secret), replicas=replicas, copies=copies)


def deal_random(access: MonotoneFamily, length: int, rng: RandomSource) -> ShareBundle:
    return deal(random_bits(rng, length), access, rng)


def reconstruct(bundle: ShareBundle, coalition: PlayerSet) -> Bits:
    """XOR one copy of each tag held by `coalition`."""
    out = np.zeros(bundle.secret_len, dtype=np.uint8)
    for tag in bundle.tags:
        holders = [p for p in players_of(coalition) if not (tag >> p) & 1]
        if not holders:
            raise NotQualified(
                f"coalition {format_set(coalition)} holds no copy of replica {format_set(tag)}",
                missing_tag=tag,
            )
        first = bundle.copies[holders[0]][tag]
        for p in holders[1:]:
            if not np.array_equal(bundle.copies[p][tag], first):
                raise Inconsistent(
                    f"copies of replica {format_set(tag)} disagree within {format_set(coalition)}",
                    tag=tag,
                )
        out ^= first
    return out


def combine_values(values: Iterable[Bits], length: int) -> Bits:
    out = np.zeros(length, dtype=np.uint8)
    for value in values:
        out ^= value
    return out


def xor_combine(a: ShareBundle, b: ShareBundle) -> ShareBundle:
    if a.access != b.access:
        raise Mismatch("bundles were dealt for different access structures")
    if a.secret_len != b.secret_len:
        raise Mismatch(f"secret lengths differ: {a.secret_len} vs {b.secret_len}")
    if set(a.tags) != set(b.tags):
        raise Mismatch("bundles carry different replica tags")
    replicas = {t: a.replicas[t] ^ b.replicas[t] for t in a.tags}
    copies = {p: {t: v ^ b.copies[p][t] for t, v in held.items()} for p, held in a.copies.items()}
    return ShareBundle(access=a.access, secret_len=a.secret_len, replicas=replicas, copies=copies)


def corrupt_copy(bundle: ShareBundle, player: int, tag: PlayerSet) -> None:
    """Flip every bit of one player's copy of one replica."""
    if tag not in bundle.copies[player]:
        raise ValueError(f"player {player} does not hold replica {format_set(tag)}")
    bundle.copies[player][tag] = bundle.copies[player][tag] ^ 1


def serialize_bundle(bundle: ShareBundle) -> str:
    lines = [f"replica {tag} {bits_to_hex(bundle.replicas[tag])}" for tag in sorted(bundle.tags)]
    for p in range(bundle.n):
        lines.extend(f"holds {p} {tag}" for tag in sorted(bundle.copies[p]))
    return "\n".join(lines) + "\n"


class ChallengeSource(str, Enum):
    VERIFIER = "verifier"
    PUBLIC_COIN = "public-coin"


@dataclass(frozen=True)
class DealerBehavior:
    """Copies of the secret bundle the dealer hands out corrupted.

    A misdealing dealer still answers every challenge with its intended
    replica values.
    """

    misdealt: tuple[tuple[int, PlayerSet], ...] = ()

    @classmethod
    def honest(cls) -> "DealerBehavior":
        return cls()

    @classmethod
    def misdealing(cls, *copies: tuple[int, PlayerSet]) -> "DealerBehavior":
        return cls(misdealt=tuple(copies))


@dataclass(eq=False)
class VssRound:
    index: int
    aux: ShareBundle
    challenge: int
    opened: dict[PlayerSet, Bits]
    complainers: PlayerSet = 0


@dataclass(eq=False)
class VssTranscript:
    challenge_source: ChallengeSource
    rounds: list[VssRound] = field(default_factory=list)

    @property
    def complaints(self) -> list[PlayerSet]:
        return [r.complainers for r in self.rounds]


@dataclass(frozen=True)
class VssVerdict:
    accepted: bool
    round: int | None = None
    complainers: PlayerSet = 0


def open_round(secret_bundle: ShareBundle, aux: ShareBundle, challenge: int) -> dict[PlayerSet, Bits]:
    """Dealer's answer: replicas of z (challenge 0) or of z xor secret (challenge 1)."""
    if challenge:
        return {t: aux.replicas[t] ^ secret_bundle.replicas[t] for t in aux.tags}
    return {t: aux.replicas[t].copy() for t in aux.tags}


def check_opened(
    secret_copies: dict[int, dict[PlayerSet, Bits]],
    aux: ShareBundle,
    challenge: int,
    opened: dict[PlayerSet, Bits],
    checkers: Iterable[int],
) -> PlayerSet:
    """Players whose own copies contradict the published replicas."""
    complainers = 0
    complete = set(opened) == set(aux.tags)
    for p in checkers:
        if not complete:
            complainers |= 1 << p
            continue
        for tag, copy in aux.copies[p].items():
            expected = copy ^ secret_copies[p][tag] if challenge else copy
            if not np.array_equal(expected, opened[tag]):
                complainers |= 1 << p
                break
    return complainers


def vss_round(
    secret_bundle: ShareBundle,
    *,
    index: int,
    rng: RandomSource,
    challenger: Callable[[], int],
    checkers: Iterable[int],
    secret_copies: dict[int, dict[PlayerSet, Bits]] | None = None,
) -> VssRound:
    aux = deal_random(secret_bundle.access, secret_bundle.secret_len, rng)
    challenge = challenger()
    opened = open_round(secret_bundle, aux, challenge)
    complainers = check_opened(
        secret_copies if secret_copies is not None else secret_bundle.copies,
        aux, challenge, opened, checkers,
    )
    if complainers:
        logger.debug(f"vss round {index}: challenge {challenge}, complaints from {format_set(complainers)}")
    return VssRound(index=index, aux=aux, challenge=challenge, opened=opened, complainers=complainers)


def vss_deal(
    secret: Bits,
    access: MonotoneFamily,
    k: int,
    rng: RandomSource,
    *,
    dealer: DealerBehavior = DealerBehavior(),
    verifier_rng: RandomSource | None = None,
) -> tuple[ShareBundle, VssTranscript, VssVerdict]:
    """Deal `secret` and run k cut-and-choose rounds.

    Challenges come from `verifier_rng` (designated verifier) or, when it is
    omitted, from the shared coin `rng`. The first round with a complaint
    rejects.
    """
    if k < 0:
        raise ValueError(f"round count must be nonnegative, got {k}")
    bundle = deal(secret, access, rng)
    for player, tag in dealer.misdealt:
        corrupt_copy(bundle, player, tag)

    source = ChallengeSource.VERIFIER if verifier_rng is not None else ChallengeSource.PUBLIC_COIN
    coin = verifier_rng if verifier_rng is not None else rng
    transcript = VssTranscript(challenge_source=source)
    checkers = range(access.n)
    for j in range(k):
        rnd = vss_round(bundle, index=j, rng=rng, challenger=lambda: random_bit(coin), checkers=checkers)
        transcript.rounds.append(rnd)
        if rnd.complainers:
            return bundle, transcript, VssVerdict(accepted=False, round=j, complainers=rnd.complainers)
    return bundle, transcript, VssVerdict(accepted=True)

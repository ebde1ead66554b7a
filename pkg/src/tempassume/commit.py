"""Bit(string) commitment on top of replicated secret sharing.

The sender masks the payload m with a random r sent privately to the
receiver, deals m xor r with access structure dual_access(A), and proves the
dealing consistent with cut-and-choose rounds whose challenges the receiver
issues. The partially robust variant aborts on any complaint; the robust
variant publishes the complained-about replicas and repeats the rounds until
no new complaints arrive.
"""

import logging
from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass, field
from enum import Enum
from typing import ClassVar, Protocol

import numpy as np

from .errors import InadmissibleStrategy, InadmissibleStructure, ParseError, ScaleBound, SimulationError
from .network import Network, encode
from .sharing import (
    DEFAULT_VSS_ROUNDS,
    Bits,
    ChallengeSource,
    RandomSource,
    ShareBundle,
    VssRound,
    VssTranscript,
    bits_from_int,
    check_opened,
    combine_values,
    deal,
    deal_random,
    open_round,
    random_bit,
    random_bits,
)
from .structures import (
    MonotoneFamily,
    PlayerId,
    PlayerSet,
    contains,
    dual_access,
    format_set,
    format_structure,
    partially_robust_admissible,
    player_set,
    players_of,
    robust_admissible,
)
from .utils import derive_seed

logger = logging.getLogger(__name__)

MAX_VIEW_PLAYERS = 4
MAX_TAPE_BITS = 22

PARTIAL_CONDITION = "no two collusions may cover all players"
ROBUST_CONDITION = "no two collusions may cover all players but one"


class Variant(str, Enum):
    PARTIAL = "partial"
    ROBUST = "robust"


class Status(str, Enum):
    COMMITTED = "committed"
    UNVEILED = "unveiled"
    ABORTED = "aborted"
    DEALER_CAUGHT = "dealer-caught"


class Phase(str, Enum):
    DURING_COMMIT = "during-commit"
    AFTER_COMMIT = "after-commit"


COMMIT_PHASE = "commit"
AFTER_COMMIT_PHASE = "after-commit"
UNVEIL_PHASE = "unveil"

_VIEW_PHASES = {
    Phase.DURING_COMMIT: (COMMIT_PHASE,),
    Phase.AFTER_COMMIT: (COMMIT_PHASE, AFTER_COMMIT_PHASE),
}


@dataclass(frozen=True)
class Strategy:
    name: ClassVar[str] = "honest"
    honest: ClassVar[bool] = True
    checks_honestly: ClassVar[bool] = True

    def describe(self) -> str:
        return self.name


@dataclass(frozen=True)
class Honest(Strategy):
    pass


@dataclass(frozen=True)
class LeakShares(Strategy):
    """Publishes every copy it holds once the commit phase has terminated."""

    name: ClassVar[str] = "leak-shares"
    honest: ClassVar[bool] = False


@dataclass(frozen=True)
class FalseComplainer(Strategy):
    """Complains about its initial shares whatever they are."""

    name: ClassVar[str] = "false-complainer"
    honest: ClassVar[bool] = False
    checks_honestly: ClassVar[bool] = False


@dataclass(frozen=True)
class UnveilFlipper(Strategy):
    """As sender, announces shares of `target` instead of the committed value."""

    name: ClassVar[str] = "unveil-flipper"
    honest: ClassVar[bool] = False
    target: int = 0

    def describe(self) -> str:
        return f"{self.name} {self.target}"


@dataclass(frozen=True)
class CoalitionReconstructor(Strategy):
    """Pools the views of `coalition` after commit and tries to reconstruct."""

    name: ClassVar[str] = "coalition-reconstructor"
    honest: ClassVar[bool] = False
    coalition: PlayerSet = 0

    def describe(self) -> str:
        return f"{self.name} " + " ".join(str(p) for p in players_of(self.coalition))


@dataclass(frozen=True)
class Misdealer(Strategy):
    """As sender, hands corrupted copies of every replica to the victims."""

    name: ClassVar[str] = "misdealer"
    honest: ClassVar[bool] = False
    victims: PlayerSet = 0

    def describe(self) -> str:
        return f"{self.name} " + " ".join(str(p) for p in players_of(self.victims))


STRATEGIES: dict[str, type[Strategy]] = {
    cls.name: cls
    for cls in (Honest, LeakShares, FalseComplainer, UnveilFlipper, CoalitionReconstructor, Misdealer)
}


def parse_strategy(text: str) -> Strategy:
    """Parse `honest`, `leak-shares`, `false-complainer`, `unveil-flipper <value>`,
    `coalition-reconstructor <players...>` or `misdealer <players...>`."""
    head, *args = text.split()
    cls = STRATEGIES.get(head)
    if cls is None:
        raise ParseError(f"unknown strategy {head!r}")
    try:
        values = [int(a) for a in args]
    except ValueError:
        raise ParseError(f"non-integer argument in strategy {text!r}") from None
    if cls is UnveilFlipper:
        if len(values) != 1:
            raise ParseError("unveil-flipper takes exactly one target value")
        return UnveilFlipper(target=values[0])
    if cls is CoalitionReconstructor:
        return CoalitionReconstructor(coalition=player_set(values))
    if cls is Misdealer:
        return Misdealer(victims=player_set(values))
    if values:
        raise ParseError(f"strategy {head!r} takes no arguments")
    return cls()


@dataclass(frozen=True)
class StrategyProfile:
    assignments: tuple[tuple[PlayerId, Strategy], ...] = ()

    @classmethod
    def of(cls, mapping: dict[PlayerId, Strategy]) -> "StrategyProfile":
        return cls(assignments=tuple(sorted(mapping.items())))

    @classmethod
    def honest(cls) -> "StrategyProfile":
        return cls()

    def of_player(self, player: PlayerId) -> Strategy:
        for p, strategy in self.assignments:
            if p == player:
                return strategy
        return Honest()

    def players_with(self, kind: type[Strategy]) -> PlayerSet:
        return player_set(p for p, s in self.assignments if isinstance(s, kind))

    def cheaters(self) -> PlayerSet:
        return player_set(p for p, s in self.assignments if not s.honest)

    def validate(self, adversary: MonotoneFamily) -> None:
        cheaters = self.cheaters()
        if not contains(adversary, cheaters):
            raise InadmissibleStrategy(
                f"cheaters {format_set(cheaters)} are not one collusion of {format_structure(adversary)}"
            )

    def describe(self) -> str:
        return ", ".join(f"{p}: {s.describe()}" for p, s in self.assignments) or "all honest"


@dataclass(frozen=True)
class UnveilResult:
    accepted: bool
    value: Bits | None = None
    contradicted: tuple[PlayerId, PlayerSet] | None = None

    def describe(self) -> str:
        if self.accepted:
            return "accepted " + "".join(str(int(b)) for b in self.value)
        player, tag = self.contradicted
        return f"rejected (flip): player {player} contradicts replica {format_set(tag)}"


@dataclass(eq=False)
class CommitSession:
    variant: Variant
    sender: PlayerId
    receiver: PlayerId
    adversary: MonotoneFamily
    access: MonotoneFamily
    k: int
    strategies: StrategyProfile
    mask: Bits
    payload: Bits
    bundle: ShareBundle
    network: Network
    vss: VssTranscript
    status: Status = Status.COMMITTED
    reason: str | None = None
    complaint_set: PlayerSet = 0
    published: dict[PlayerSet, Bits] = field(default_factory=dict)
    leaked: PlayerSet = 0
    iterations: int = 0
    reconstructions: dict[PlayerSet, Bits | None] = field(default_factory=dict)
    unveil_result: UnveilResult | None = None

    @property
    def n(self) -> int:
        return self.adversary.n

    def effective_copies(self) -> dict[PlayerId, dict[PlayerSet, Bits]]:
        """Every player's copies, with published replicas replacing private ones."""
        return {
            p: {t: self.published.get(t, v) for t, v in held.items()}
            for p, held in self.bundle.copies.items()
        }

    def published_covers_secret(self) -> bool:
        return bool(self.published) and set(self.published) == set(self.bundle.tags)

    def view(self, coalition: PlayerSet, phase: Phase = Phase.AFTER_COMMIT) -> tuple:
        return self.network.view(coalition, _VIEW_PHASES[phase])

    def _finish(self, status: Status, reason: str | None = None) -> None:
        self.status = status
        self.reason = reason
        label = status.value if reason is None else f"{status.value}({reason})"
        self.network.verdict(label)
        log = logger.info if status is Status.COMMITTED else logger.warning
        log(f"commit {self.sender}->{self.receiver} [{self.variant.value}]: {label}")


def _checkers(strategies: StrategyProfile, n: int, sender: PlayerId) -> list[PlayerId]:
    return [p for p in range(n) if p != sender and strategies.of_player(p).checks_honestly]


def _start_session(
    variant: Variant,
    m: Bits,
    sender: PlayerId,
    receiver: PlayerId,
    adversary: MonotoneFamily,
    k: int,
    strategies: StrategyProfile,
    rng: RandomSource,
) -> CommitSession:
    n = adversary.n
    if sender == receiver:
        raise ValueError("sender and receiver must differ")
    if not (0 <= sender < n and 0 <= receiver < n):
        raise ValueError(f"players {sender}, {receiver} out of range for n={n}")
    if k < 0:
        raise ValueError(f"round count must be nonnegative, got {k}")
    strategies.validate(adversary)

    m = np.asarray(m, dtype=np.uint8)
    access = dual_access(adversary)
    network = Network(n)

    r = random_bits(rng, len(m))
    network.send(sender, receiver, "mask", encode(r))
    bundle = deal(m ^ r, access, rng)

    sender_strategy = strategies.of_player(sender)
    if isinstance(sender_strategy, Misdealer):
        for victim in players_of(sender_strategy.victims):
            for tag in list(bundle.copies[victim]):
                bundle.copies[victim][tag] = bundle.copies[victim][tag] ^ 1
        logger.debug(f"sender {sender} misdealt copies to {format_set(sender_strategy.victims)}")

    for p in range(n):
        if p != sender:
            network.send(sender, p, "share", encode(bundle.copies[p]))
    network.next_round()

    return CommitSession(
        variant=variant,
        sender=sender,
        receiver=receiver,
        adversary=adversary,
        access=access,
        k=k,
        strategies=strategies,
        mask=r,
        payload=m,
        bundle=bundle,
        network=network,
        vss=VssTranscript(challenge_source=ChallengeSource.VERIFIER),
    )


def _initial_complaints(session: CommitSession) -> PlayerSet:
    complainers = session.strategies.players_with(FalseComplainer) & ~(1 << session.sender)
    for p in players_of(complainers):
        session.network.broadcast(p, "complaint", encode("initial"))
    if complainers:
        session.network.next_round()
    return complainers


def _vss_round(session: CommitSession, index: int, rng: RandomSource, verifier_rng: RandomSource) -> VssRound:
    net = session.network
    aux = deal_random(session.access, session.bundle.secret_len, rng)
    for p in range(session.n):
        if p != session.sender:
            net.send(session.sender, p, "vss-share", encode(index, aux.copies[p]))
    net.next_round()
    challenge = random_bit(verifier_rng)
    net.broadcast(session.receiver, "challenge", encode(index, challenge))
    net.next_round()
    opened = open_round(session.bundle, aux, challenge)
    net.broadcast(session.sender, "open", encode(index, opened))
    net.next_round()
    complainers = check_opened(
        session.effective_copies(), aux, challenge, opened,
        _checkers(session.strategies, session.n, session.sender),
    )
    for p in players_of(complainers):
        net.broadcast(p, "complaint", encode(index))
    if complainers:
        net.next_round()
        logger.debug(f"round {index}: challenge {challenge}, complaints from {format_set(complainers)}")
    rnd = VssRound(index=index, aux=aux, challenge=challenge, opened=opened, complainers=complainers)
    session.vss.rounds.append(rnd)
    return rnd


def _publish(session: CommitSession, players: PlayerSet) -> PlayerSet:
    """Sender publishes the m xor r replicas held by `players`.

    Returns the honest holders whose private copy contradicts a newly
    published value; they complain in turn.
    """
    new = {t: session.bundle.replicas[t] for t in session.bundle.tags_held_by(players) if t not in session.published}
    if not new:
        return 0
    session.network.broadcast(session.sender, "publish", encode(new))
    session.network.next_round()
    disagree = 0
    for p in _checkers(session.strategies, session.n, session.sender):
        for tag, value in new.items():
            copy = session.bundle.copies[p].get(tag)
            if copy is not None and not np.array_equal(copy, value):
                disagree |= 1 << p
    session.published.update(new)
    for p in players_of(disagree):
        session.network.broadcast(p, "complaint", encode("publish"))
    return disagree


def _after_commit(session: CommitSession) -> None:
    """Post-termination behaviour: leaks and coalition reconstruction attempts."""
    net = session.network
    net.enter_phase(AFTER_COMMIT_PHASE)
    for p in players_of(session.strategies.players_with(LeakShares)):
        net.broadcast(p, "leak", encode(session.bundle.copies[p]))
        session.leaked |= 1 << p
    for p, strategy in session.strategies.assignments:
        if isinstance(strategy, CoalitionReconstructor):
            session.reconstructions[strategy.coalition] = attempt_reconstruction(session, strategy.coalition)


def attempt_reconstruction(session: CommitSession, coalition: PlayerSet) -> Bits | None:
    """What `coalition` learns about m from its copies plus all public replicas.

    Returns m when the coalition knows every tag and the mask, else None.
    """
    known: dict[PlayerSet, Bits] = dict(session.published)
    for p in players_of(coalition | session.leaked):
        for tag, value in session.bundle.copies[p].items():
            known.setdefault(tag, value)
    if set(known) != set(session.bundle.tags):
        return None
    if not (coalition >> session.receiver) & 1 and not (coalition >> session.sender) & 1:
        return None
    return combine_values(known.values(), session.bundle.secret_len) ^ session.mask


def _randomness(seed: int, rng: RandomSource | None, verifier_rng: RandomSource | None):
    if rng is None:
        rng = np.random.default_rng(derive_seed(seed, "dealer"))
    if verifier_rng is None:
        verifier_rng = np.random.default_rng(derive_seed(seed, "verifier")) if isinstance(rng, np.random.Generator) else rng
    return rng, verifier_rng


def commit_partial(
    m: Bits,
    sender: PlayerId,
    receiver: PlayerId,
    adversary: MonotoneFamily,
    k: int = DEFAULT_VSS_ROUNDS,
    strategies: StrategyProfile | None = None,
    seed: int = 0,
    *,
    rng: RandomSource | None = None,
    verifier_rng: RandomSource | None = None,
) -> CommitSession:
    """Commit with abort on any complaint."""
    if not partially_robust_admissible(adversary):
        raise InadmissibleStructure(
            f"{format_structure(adversary)} violates the partial-robustness condition: {PARTIAL_CONDITION}",
            condition=PARTIAL_CONDITION,
        )
    strategies = strategies or StrategyProfile.honest()
    rng, verifier_rng = _randomness(seed, rng, verifier_rng)
    session = _start_session(Variant.PARTIAL, m, sender, receiver, adversary, k, strategies, rng)
    session.iterations = 1

    complainers = _initial_complaints(session)
    if complainers:
        session.complaint_set = complainers
        session._finish(Status.ABORTED, "conflict")
        return session
    for j in range(k):
        rnd = _vss_round(session, j, rng, verifier_rng)
        if rnd.complainers:
            session.complaint_set = rnd.complainers
            session._finish(Status.ABORTED, "conflict")
            return session
    session._finish(Status.COMMITTED)
    _after_commit(session)
    return session


def commit_robust(
    m: Bits,
    sender: PlayerId,
    receiver: PlayerId,
    adversary: MonotoneFamily,
    k: int = DEFAULT_VSS_ROUNDS,
    strategies: StrategyProfile | None = None,
    seed: int = 0,
    *,
    rng: RandomSource | None = None,
    verifier_rng: RandomSource | None = None,
) -> CommitSession:
    """Commit with the complaint-publication loop.

    Complained-about replicas are published; rounds repeat until an
    iteration brings no new complainer. A complainer set outside the
    adversary structure convicts the sender.
    """
    if not robust_admissible(adversary):
        raise InadmissibleStructure(
            f"{format_structure(adversary)} violates the robustness condition: {ROBUST_CONDITION}",
            condition=ROBUST_CONDITION,
        )
    strategies = strategies or StrategyProfile.honest()
    rng, verifier_rng = _randomness(seed, rng, verifier_rng)
    session = _start_session(Variant.ROBUST, m, sender, receiver, adversary, k, strategies, rng)
    n = session.n

    complained = _initial_complaints(session)
    complained |= _publish(session, complained)
    session.complaint_set = complained

    while True:
        session.iterations += 1
        previous = session.complaint_set
        for j in range(k):
            rnd = _vss_round(session, j, rng, verifier_rng)
            session.complaint_set |= rnd.complainers
        if (session.complaint_set >> receiver) & 1:
            session._finish(Status.ABORTED, "pair-conflict")
            return session
        if not contains(adversary, session.complaint_set):
            session._finish(Status.DEALER_CAUGHT, f"complainers {format_set(session.complaint_set)}")
            return session
        session.complaint_set |= _publish(session, session.complaint_set)
        if session.complaint_set == previous:
            break
        if session.iterations > n + 1:
            raise SimulationError(f"complaint loop exceeded {n + 1} iterations")
    session._finish(Status.COMMITTED)
    _after_commit(session)
    return session


def commit(variant: Variant, *args, **kwargs) -> CommitSession:
    fn = commit_partial if variant is Variant.PARTIAL else commit_robust
    return fn(*args, **kwargs)


def announce_shares(session: CommitSession) -> dict[PlayerSet, Bits]:
    """Replica values the sender announces at unveil, per its strategy.

    A flipping sender alters the replica with the fewest honest holders.
    """
    announced = {t: v.copy() for t, v in session.bundle.replicas.items()}
    strategy = session.strategies.of_player(session.sender)
    if not isinstance(strategy, UnveilFlipper):
        return announced
    delta = session.payload ^ bits_from_int(strategy.target, session.bundle.secret_len)
    if not delta.any():
        return announced
    cheaters = session.strategies.cheaters()

    def honest_holders(tag: PlayerSet) -> int:
        return sum(1 for p in session.bundle.holders(tag) if not (cheaters >> p) & 1)

    tag = min(session.bundle.tags, key=lambda t: (honest_holders(t), t))
    announced[tag] = announced[tag] ^ delta
    logger.debug(f"sender {session.sender} flips replica {format_set(tag)} ({honest_holders(tag)} honest holders)")
    return announced


def unveil(
    session: CommitSession,
    announced: dict[PlayerSet, Bits] | None = None,
    positions: Iterable[int] | None = None,
) -> UnveilResult:
    """Open the commitment, or only the listed bit positions of it.

    Every honest player confirms the announced replicas against its copies;
    the receiver then removes its mask.
    """
    if session.status is not Status.COMMITTED:
        raise SimulationError(f"cannot unveil a session in status {session.status.value}")
    if announced is None:
        announced = announce_shares(session)
    idx = np.arange(session.bundle.secret_len) if positions is None else np.asarray(list(positions), dtype=np.int64)

    net = session.network
    net.enter_phase(UNVEIL_PHASE)
    net.broadcast(session.sender, "announce", encode({t: v[idx] for t, v in announced.items()}))
    net.next_round()

    stray = sorted(set(announced) ^ set(session.bundle.tags))
    if stray:
        # announced keys must be exactly the public replica tags
        net.broadcast(session.receiver, "object", encode(stray[0]))
        result = UnveilResult(accepted=False, contradicted=(session.receiver, stray[0]))
        session.unveil_result = result
        net.verdict("rejected(flip)")
        logger.warning(f"unveil rejected: announced replica set differs at {format_set(stray[0])}")
        return result

    cheaters = session.strategies.cheaters()
    copies = session.effective_copies()
    for p in range(session.n):
        if p == session.sender or (cheaters >> p) & 1:
            continue
        for tag in sorted(copies[p]):
            if tag not in announced or not np.array_equal(copies[p][tag][idx], announced[tag][idx]):
                net.broadcast(p, "object", encode(tag))
                result = UnveilResult(accepted=False, contradicted=(p, tag))
                session.unveil_result = result
                net.verdict("rejected(flip)")
                logger.warning(f"unveil rejected: player {p} contradicts replica {format_set(tag)}")
                return result
        net.broadcast(p, "confirm", b"")

    value = combine_values((v[idx] for v in announced.values()), len(idx)) ^ session.mask[idx]
    result = UnveilResult(accepted=True, value=value)
    session.unveil_result = result
    if positions is None:
        session.status = Status.UNVEILED
    net.verdict("unveiled")
    return result


class BitTape:
    """Random source reading consecutive bits of an integer.

    Drives exhaustive enumeration: every protocol run consumes bits from the
    tape instead of a generator.
    """

    def __init__(self, value: int = 0):
        self.value = value
        self.pos = 0

    def integers(self, low, high=None, size=None, dtype=np.int64):
        if high is None:
            low, high = 0, low
        if (low, high) != (0, 2):
            raise ValueError("a bit tape only produces fair bits")
        count = 1 if size is None else int(size)
        bits = [(self.value >> (self.pos + i)) & 1 for i in range(count)]
        self.pos += count
        if size is None:
            return bits[0]
        return np.array(bits, dtype=dtype)


@dataclass(frozen=True)
class CommitTemplate:
    """Everything about a commitment run except its randomness and payload."""

    variant: Variant
    adversary: MonotoneFamily
    sender: PlayerId
    receiver: PlayerId
    k: int = 1
    strategies: StrategyProfile = StrategyProfile()

    def run(self, m: Bits, tape: BitTape) -> CommitSession:
        return commit(
            self.variant, m, self.sender, self.receiver, self.adversary, self.k, self.strategies,
            rng=tape, verifier_rng=tape,
        )


@dataclass
class ViewDistribution:
    coalition: PlayerSet
    phase: Phase
    by_secret: dict[int, Counter]

    @property
    def identical(self) -> bool:
        return self.by_secret[0] == self.by_secret[1]


def coalition_view_distributions(
    template: CommitTemplate,
    coalitions: Iterable[PlayerSet],
    phase: Phase = Phase.AFTER_COMMIT,
) -> dict[PlayerSet, ViewDistribution]:
    """Exact view distributions over all protocol randomness, for m = 0 and m = 1.

    One-bit payloads, at most four players; every run must consume the same
    number of random bits.
    """
    if template.adversary.n > MAX_VIEW_PLAYERS:
        raise ScaleBound(f"exhaustive views need n <= {MAX_VIEW_PLAYERS}, got {template.adversary.n}")
    coalitions = list(dict.fromkeys(coalitions))
    counter = BitTape()
    template.run(np.zeros(1, dtype=np.uint8), counter)
    width = counter.pos
    if width > MAX_TAPE_BITS:
        raise ScaleBound(f"enumeration over {width} random bits exceeds {MAX_TAPE_BITS}")
    logger.info(f"enumerating 2^{width} randomness tapes for {len(coalitions)} coalitions")

    result = {c: ViewDistribution(c, phase, {0: Counter(), 1: Counter()}) for c in coalitions}
    phases = _VIEW_PHASES[phase]
    for secret in (0, 1):
        m = np.array([secret], dtype=np.uint8)
        for value in range(1 << width):
            tape = BitTape(value)
            session = template.run(m, tape)
            if tape.pos != width:
                raise ScaleBound("randomness consumption varies between runs; enumeration would be biased")
            for c in coalitions:
                result[c].by_secret[secret][session.network.view(c, phases)] += 1
    return result


def coalition_view_distribution(
    template: CommitTemplate, coalition: PlayerSet, phase: Phase = Phase.AFTER_COMMIT
) -> ViewDistribution:
    return coalition_view_distributions(template, [coalition], phase)[coalition]


class CommitmentBackend(Protocol):
    def commit(self, bits: Bits, sender: PlayerId, receiver: PlayerId, rng: RandomSource) -> "CommitHandle": ...

    def open(self, handle: "CommitHandle", positions: Iterable[int]) -> Bits | None: ...


@dataclass(eq=False)
class CommitHandle:
    committed: bool
    session: CommitSession | None = None
    value: Bits | None = None
    reason: str | None = None


@dataclass(frozen=True)
class SecretSharingCommitment:
    """Commitment backend running the secret-sharing protocols."""

    adversary: MonotoneFamily
    k: int = DEFAULT_VSS_ROUNDS
    variant: Variant = Variant.PARTIAL
    strategies: StrategyProfile = StrategyProfile()

    def commit(self, bits: Bits, sender: PlayerId, receiver: PlayerId, rng: RandomSource) -> CommitHandle:
        session = commit(
            self.variant, bits, sender, receiver, self.adversary, self.k, self.strategies,
            rng=rng, verifier_rng=rng,
        )
        if session.status is not Status.COMMITTED:
            return CommitHandle(committed=False, session=session, reason=session.reason or session.status.value)
        return CommitHandle(committed=True, session=session)

    def open(self, handle: CommitHandle, positions: Iterable[int]) -> Bits | None:
        result = unveil(handle.session, positions=positions)
        return result.value if result.accepted else None


@dataclass(frozen=True)
class TrustedPartyCommitment:
    """Committing is handing the bits to an incorruptible third party."""

    def commit(self, bits: Bits, sender: PlayerId, receiver: PlayerId, rng: RandomSource) -> CommitHandle:
        return CommitHandle(committed=True, value=np.asarray(bits, dtype=np.uint8).copy())

    def open(self, handle: CommitHandle, positions: Iterable[int]) -> Bits | None:
        return handle.value[np.asarray(list(positions), dtype=np.int64)]

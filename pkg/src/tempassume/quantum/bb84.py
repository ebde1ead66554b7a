"""Oblivious transfer from BB84 qubits and a bit commitment.

Alice sends N qubits, each a random bit x_i in a random basis theta_i. Bob
measures and commits to every (basis, result) pair before Alice reveals
anything; Alice opens a random test set and checks the results where the
bases agree. Bob then splits the untested positions into a good set (bases
agree) and a bad one, hides which is which behind his choice bit, and Alice
masks each payload bit with the parity of her bits on one set.

Positions are independent single qubits, so the statevectors are held as an
(N, 2) array rather than one register.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..commit import CommitHandle, CommitmentBackend, SecretSharingCommitment
from ..network import Network, encode
from ..structures import MonotoneFamily, PlayerId, threshold_structure
from ..utils import derive_seed
from .state import H

logger = logging.getLogger(__name__)

DEFAULT_N = 128
DEFAULT_ALPHA = 0.5
MIN_GOOD = 16
MIN_N = 32

ALICE: PlayerId = 1
BOB: PlayerId = 0
QUANTUM_CHANNEL = "qubits"


def default_adversary() -> MonotoneFamily:
    return threshold_structure(3, 1)


class Bb84Verdict(str, Enum):
    ACCEPT = "accept"
    ABORT_CHEAT_DETECTED = "abort-cheat-detected"
    ABORT_TOO_FEW_GOOD = "abort-too-few-good"
    ABORT_COMMIT = "abort-commit"


class Attack(str, Enum):
    NONE = "none"
    DELAYED = "delayed"


@dataclass(eq=False)
class Bb84Session:
    n: int
    alpha: float
    forcing: bool
    attack: Attack
    x: np.ndarray
    theta: np.ndarray
    bob_theta: np.ndarray
    bob_y: np.ndarray
    network: Network
    commitment: CommitHandle | None = None
    test_set: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    index_sets: tuple[np.ndarray, np.ndarray] | None = None
    masked: tuple[int, int] | None = None
    output: int | None = None
    recovered: tuple[int, int] | None = None
    mismatches: int = 0
    verdict: Bb84Verdict = Bb84Verdict.ACCEPT

    @property
    def remaining(self) -> np.ndarray:
        mask = np.ones(self.n, dtype=bool)
        mask[self.test_set] = False
        return np.flatnonzero(mask)


def prepare_qubits(x: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Statevectors |x_i> in the computational (0) or Hadamard (1) basis."""
    states = np.zeros((len(x), 2), dtype=complex)
    states[np.arange(len(x)), x] = 1.0
    states[theta == 1] = states[theta == 1] @ H.T
    return states


def measure_qubits(states: np.ndarray, basis: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Measure each qubit in its basis; returns the outcomes."""
    rotated = states.copy()
    rotated[basis == 1] = rotated[basis == 1] @ H.T
    p1 = np.abs(rotated[:, 1]) ** 2
    return (rng.random(len(states)) < p1).astype(np.uint8)


def interleave(theta: np.ndarray, y: np.ndarray) -> np.ndarray:
    out = np.empty(2 * len(theta), dtype=np.uint8)
    out[0::2] = theta
    out[1::2] = y
    return out


def _parity(bits: np.ndarray, positions: np.ndarray) -> int:
    return int(np.bitwise_xor.reduce(bits[positions])) if len(positions) else 0


def bb84_ot(
    b0: int,
    b1: int,
    c: int,
    n: int = DEFAULT_N,
    alpha: float = DEFAULT_ALPHA,
    backend: CommitmentBackend | None = None,
    attack: Attack = Attack.NONE,
    seed: int = 0,
    *,
    forcing: bool = True,
    min_good: int = MIN_GOOD,
) -> Bb84Session:
    """One 1-out-of-2 OT of bits (b0, b1) from Alice to Bob with choice c."""
    if n < MIN_N:
        raise ValueError(f"need at least {MIN_N} positions, got {n}")
    if not 0 < alpha < 1:
        raise ValueError(f"test fraction must lie in (0, 1), got {alpha}")
    backend = backend or SecretSharingCommitment(default_adversary())
    alice_rng = np.random.default_rng(derive_seed(seed, "alice"))
    bob_rng = np.random.default_rng(derive_seed(seed, "bob"))
    channel_rng = np.random.default_rng(derive_seed(seed, "channel"))
    commit_rng = np.random.default_rng(derive_seed(seed, "commit"))

    net = Network(n=max(ALICE, BOB) + 1, phase="bb84")
    x = alice_rng.integers(0, 2, size=n, dtype=np.uint8)
    theta = alice_rng.integers(0, 2, size=n, dtype=np.uint8)
    qubits = prepare_qubits(x, theta)
    net.send(ALICE, BOB, QUANTUM_CHANNEL, encode(n))
    net.next_round()

    bob_theta = bob_rng.integers(0, 2, size=n, dtype=np.uint8)
    if attack is Attack.DELAYED:
        # qubits stay stored; Bob's claimed results are guesses
        bob_y = bob_rng.integers(0, 2, size=n, dtype=np.uint8)
    else:
        bob_y = measure_qubits(qubits, bob_theta, channel_rng)
    session = Bb84Session(n, alpha, forcing, attack, x, theta, bob_theta, bob_y, net)

    if forcing:
        handle = backend.commit(interleave(bob_theta, bob_y), BOB, ALICE, commit_rng)
        session.commitment = handle
        net.broadcast(BOB, "committed", encode(handle.committed))
        net.next_round()
        if not handle.committed:
            return _finish(session, Bb84Verdict.ABORT_COMMIT)

        session.test_set = np.sort(alice_rng.choice(n, size=int(alpha * n), replace=False))
        net.send(ALICE, BOB, "test-set", encode(session.test_set.tolist()))
        net.next_round()
        tested = session.test_set
        positions = np.empty(2 * len(tested), dtype=np.int64)
        positions[0::2], positions[1::2] = 2 * tested, 2 * tested + 1
        opened = backend.open(handle, positions)
        if opened is None:
            return _finish(session, Bb84Verdict.ABORT_COMMIT)
        opened_theta, opened_y = opened[0::2], opened[1::2]
        agree = opened_theta == theta[tested]
        session.mismatches = int(np.sum(agree & (opened_y != x[tested])))
        if session.mismatches:
            logger.debug(f"{session.mismatches} tested positions contradict Alice's bits")
            return _finish(session, Bb84Verdict.ABORT_CHEAT_DETECTED)

    remaining = session.remaining
    net.send(ALICE, BOB, "bases", encode(theta[remaining]))
    net.next_round()

    if attack is Attack.DELAYED:
        # measuring the stored qubits in Alice's announced bases reads x exactly
        session.bob_y[remaining] = measure_qubits(qubits[remaining], theta[remaining], channel_rng)

    good = remaining[bob_theta[remaining] == theta[remaining]]
    bad = remaining[bob_theta[remaining] != theta[remaining]]
    size = min(len(good), len(bad))
    if size < min_good:
        return _finish(session, Bb84Verdict.ABORT_TOO_FEW_GOOD)
    sets = (good[:size], bad[:size]) if c == 0 else (bad[:size], good[:size])
    session.index_sets = sets
    net.send(BOB, ALICE, "index-sets", encode(sets[0].tolist(), sets[1].tolist()))
    net.next_round()

    e0 = b0 ^ _parity(x, sets[0])
    e1 = b1 ^ _parity(x, sets[1])
    session.masked = (e0, e1)
    net.send(ALICE, BOB, "masked", encode(e0, e1))
    net.next_round()

    session.output = (e0, e1)[c] ^ _parity(session.bob_y, sets[c])
    if attack is Attack.DELAYED:
        session.recovered = (e0 ^ _parity(session.bob_y, sets[0]), e1 ^ _parity(session.bob_y, sets[1]))
    return _finish(session, Bb84Verdict.ACCEPT)


def _finish(session: Bb84Session, verdict: Bb84Verdict) -> Bb84Session:
    session.verdict = verdict
    session.network.verdict(verdict.value)
    if verdict is not Bb84Verdict.ACCEPT:
        logger.info(f"bb84 ot aborted: {verdict.value}")
    return session


def detection_probability(tested: int) -> float:
    """Chance that a guessing Bob is caught on `tested` opened positions."""
    return 1.0 - 0.75**tested

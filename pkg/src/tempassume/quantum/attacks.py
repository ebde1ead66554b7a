"""Purification attacks on toy quantum bit commitments.

Every toy commitment is a pair of pure states (one per committed bit) shared
by Alice and Bob. Either Bob's reductions differ, so Bob can distinguish, or
they coincide and Alice flips the bit with a local unitary. A demo certifies
exactly one of the two.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..errors import AttackInconclusive, NotSameReduction
from .state import (
    QuantumState,
    Side,
    apply_local,
    fidelity,
    from_terms,
    hjw_unitary,
    partial_trace,
    project,
    trace_distance,
)

logger = logging.getLogger(__name__)

SAME_TOL = 1e-10
FLIP_TOL = 1e-8
ANCILLA_WEIGHTS = (0.7, 0.3)


class Certified(str, Enum):
    DISTINGUISHABLE = "distinguishable"
    FLIPPABLE = "flippable"


def _entangling(b: int) -> QuantumState:
    if b:
        return from_terms({"01": 1, "10": 1}, alice_qubits=1)
    return from_terms({"00": 1, "11": 1}, alice_qubits=1)


def _revealing(b: int) -> QuantumState:
    return from_terms({f"0{b}": 1}, alice_qubits=1)


def _measure_then_flip(b: int) -> QuantumState:
    # qubit 0 is Alice's ancilla, qubit 1 her half of the pair, qubit 2 Bob's
    a0, a1 = (np.sqrt(w) for w in ANCILLA_WEIGHTS)
    pair = ("01", "10") if b else ("00", "11")
    return from_terms(
        {f"{o}{p}": amp for o, amp in (("0", a0), ("1", a1)) for p in pair},
        alice_qubits=2,
    )


@dataclass(frozen=True)
class ToyCommitment:
    name: str
    prepare: Callable[[int], QuantumState]
    ancilla: int | None = None


TOY_PROTOCOLS: dict[str, ToyCommitment] = {
    "entangling": ToyCommitment("entangling", _entangling),
    "revealing": ToyCommitment("revealing", _revealing),
    "measure-then-flip": ToyCommitment("measure-then-flip", _measure_then_flip, ancilla=0),
}


@dataclass
class AttackReport:
    protocol: str
    trace_distance: float
    certified: Certified
    flip_fidelity: float | None = None
    outcome_probabilities: dict[int, tuple[float, float]] = field(default_factory=dict)
    note: str = ""

    def lines(self) -> list[str]:
        out = [f"protocol: {self.protocol}", f"trace_distance: {self.trace_distance:.12f}"]
        if self.flip_fidelity is not None:
            out.append(f"flip_fidelity: {self.flip_fidelity:.12f}")
        for outcome, (p0, p1) in sorted(self.outcome_probabilities.items()):
            out.append(f"ancilla outcome {outcome}: p(b=0)={p0:.6f} p(b=1)={p1:.6f}")
        out.append(f"certified: {self.certified.value}")
        if self.note:
            out.append(f"note: {self.note}")
        return out


def _flip_fidelity(psi: QuantumState, phi: QuantumState) -> float:
    u = hjw_unitary(psi, phi)
    return fidelity(apply_local(psi, u), phi)


def analyze_pair(name: str, psi: QuantumState, phi: QuantumState, ancilla: int | None = None) -> AttackReport:
    """Certify a pair of commitment states as distinguishable or flippable."""
    d = trace_distance(partial_trace(psi, Side.BOB), partial_trace(phi, Side.BOB))
    if d >= SAME_TOL:
        try:
            hjw_unitary(psi, phi)
        except NotSameReduction as e:
            return AttackReport(name, d, Certified.DISTINGUISHABLE, note=e.message)
        raise AttackInconclusive(f"{name}: reductions differ by {d:.3g} yet a flip unitary was produced")

    if ancilla is None:
        fid = _flip_fidelity(psi, phi)
        probabilities = {}
    else:
        # Alice measures the ancilla first; flip conditioned on each outcome
        probabilities = {}
        fid = 1.0
        for outcome in (0, 1):
            p0, post0 = project(psi, ancilla, outcome)
            p1, post1 = project(phi, ancilla, outcome)
            probabilities[outcome] = (p0, p1)
            if abs(p0 - p1) > SAME_TOL:
                raise AttackInconclusive(f"{name}: ancilla outcome {outcome} depends on the committed bit")
            if post0 is not None:
                fid = min(fid, _flip_fidelity(post0, post1))

    if fid <= 1 - FLIP_TOL:
        raise AttackInconclusive(f"{name}: equal reductions but flip fidelity only {fid:.12f}")
    return AttackReport(name, d, Certified.FLIPPABLE, flip_fidelity=fid, outcome_probabilities=probabilities)


def mayers_attack_demo(protocol: str | ToyCommitment) -> AttackReport:
    toy = TOY_PROTOCOLS[protocol] if isinstance(protocol, str) else protocol
    report = analyze_pair(toy.name, toy.prepare(0), toy.prepare(1), ancilla=toy.ancilla)
    logger.info(f"attack demo {toy.name}: {report.certified.value} (d={report.trace_distance:.3g})")
    return report


def _third_party_state(b: int) -> QuantumState:
    # qubits: Alice, third party T, Bob
    return from_terms({f"00{b}": 1, f"01{1 - b}": 1}, alice_qubits=1)


@dataclass
class ThirdPartyReport:
    joins_bob: AttackReport
    joins_alice: AttackReport
    honest_bob_distance: float
    honest_alice_distance: float

    def lines(self) -> list[str]:
        return (
            ["third party joins Bob:"]
            + [f"  {line}" for line in self.joins_bob.lines()]
            + ["third party joins Alice:"]
            + [f"  {line}" for line in self.joins_alice.lines()]
            + [
                f"honest third party, Bob's view distance: {self.honest_bob_distance:.12f}",
                f"honest third party, remote view distance for Alice: {self.honest_alice_distance:.12f}",
            ]
        )


def third_party_demo() -> ThirdPartyReport:
    """An honest-but-curious third party cannot be a temporary assumption.

    With the third party honest, Bob alone sees nothing and Alice alone
    cannot flip (the third party and Bob together hold different states).
    Once it sides with Bob the commitment is distinguishable; once it sides
    with Alice the commitment is flippable.
    """
    psi, phi = _third_party_state(0), _third_party_state(1)
    joins_bob = analyze_pair("third-party-joins-bob", psi, phi)
    joins_alice = analyze_pair("third-party-joins-alice", psi.repartition(2), phi.repartition(2))

    bob_only = trace_distance(partial_trace(psi.repartition(2), Side.BOB), partial_trace(phi.repartition(2), Side.BOB))
    alice_only = trace_distance(partial_trace(psi, Side.BOB), partial_trace(phi, Side.BOB))
    return ThirdPartyReport(joins_bob, joins_alice, bob_only, alice_only)

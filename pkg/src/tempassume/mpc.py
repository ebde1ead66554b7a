"""Composition: OT reversal, 1-out-of-4 OT and semi-honest GMW evaluation.

Every wire of a boolean circuit is XOR-shared among the players. XOR and NOT
gates are local; an AND gate costs one 1-out-of-4 OT per pair of players,
itself built from three 1-out-of-2 OTs. Outputs are opened by broadcast.
"""

import logging
import re
from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import Enum
from typing import Protocol

import numpy as np

from .errors import CircuitInvalid, OtAborted, ParseError
from .network import Network, encode
from .quantum.bb84 import DEFAULT_ALPHA, DEFAULT_N, Bb84Verdict, bb84_ot
from .commit import CommitmentBackend
from .sharing import RandomSource, random_bit
from .structures import PlayerId, PlayerSet, choose_direction
from .utils import derive_seed

logger = logging.getLogger(__name__)


class OtBackend(Protocol):
    def transfer(self, sender: PlayerId, receiver: PlayerId, b0: int, b1: int, c: int) -> int: ...


@dataclass
class IdealOT:
    calls: int = 0

    def transfer(self, sender: PlayerId, receiver: PlayerId, b0: int, b1: int, c: int) -> int:
        self.calls += 1
        return b1 if c else b0


@dataclass
class Bb84OT:
    """Each transfer runs a full BB84 OT with its own derived seed."""

    seed: int = 0
    n: int = DEFAULT_N
    alpha: float = DEFAULT_ALPHA
    backend: CommitmentBackend | None = None
    calls: int = 0

    def transfer(self, sender: PlayerId, receiver: PlayerId, b0: int, b1: int, c: int) -> int:
        session = bb84_ot(
            b0, b1, c, self.n, self.alpha, self.backend,
            seed=derive_seed(self.seed, "ot", self.calls, sender, receiver),
        )
        self.calls += 1
        if session.verdict is not Bb84Verdict.ACCEPT:
            raise OtAborted(f"BB84 OT {sender}->{receiver} aborted: {session.verdict.value}", reason=session.verdict.value)
        return session.output


@dataclass(frozen=True)
class ReversedTransfer:
    output: int
    sender_view: tuple[int, ...]
    receiver_view: tuple[int, ...]


def ot_reverse(
    backend: OtBackend,
    sender: PlayerId,
    receiver: PlayerId,
    y0: int,
    y1: int,
    c: int,
    rng: RandomSource,
) -> ReversedTransfer:
    """OT from `sender` to `receiver` using one OT in the opposite direction.

    The receiver offers (r, r xor c); the sender picks with y0 xor y1, gets
    a = r xor (y0 xor y1) c, and replies e = y0 xor a; the receiver outputs
    e xor r = y_c.
    """
    r = random_bit(rng)
    s = y0 ^ y1
    a = backend.transfer(receiver, sender, r, r ^ c, s)
    e = y0 ^ a
    return ReversedTransfer(output=e ^ r, sender_view=(y0, y1, a), receiver_view=(c, r, e))


def ot4_from_ot2(
    backend: OtBackend,
    sender: PlayerId,
    receiver: PlayerId,
    messages: tuple[int, int, int, int],
    choice: tuple[int, int],
    rng: RandomSource,
) -> int:
    """Receiver learns messages[2 c1 + c2] from three 1-out-of-2 OTs."""
    m00, m01, m10, m11 = messages
    c1, c2 = choice
    s0, s1 = random_bit(rng), random_bit(rng)
    key = backend.transfer(sender, receiver, s0, s1, c1)
    row0 = backend.transfer(sender, receiver, m00 ^ s0, m01 ^ s0, c2)
    row1 = backend.transfer(sender, receiver, m10 ^ s1, m11 ^ s1, c2)
    return (row1 if c1 else row0) ^ key


@dataclass
class OtChannels:
    """Pairwise OT between players, oriented against a maximal set M.

    The BB84 construction makes the OT receiver commit to the OT sender.
    When M is given, each transfer runs in the direction choose_direction
    allows for that commitment and is reversed when it points the other way.
    """

    backend: OtBackend
    orientation: PlayerSet | None = None
    network: Network | None = None
    rng: RandomSource | None = None
    transfers: int = 0
    reversed: int = 0

    def transfer(self, sender: PlayerId, receiver: PlayerId, b0: int, b1: int, c: int) -> int:
        self.transfers += 1
        if self.orientation is not None:
            committer, _ = choose_direction((receiver, sender), self.orientation)
            if committer != receiver:
                self.reversed += 1
                rt = ot_reverse(self.backend, sender, receiver, b0, b1, c, self.rng)
                if self.network is not None:
                    _, _, a = rt.sender_view
                    _, _, e = rt.receiver_view
                    self.network.local(sender, "ot-output", encode(a))
                    self.network.send(sender, receiver, "ot-reply", encode(e))
                return rt.output
        out = self.backend.transfer(sender, receiver, b0, b1, c)
        self._record(receiver, out)
        return out

    def _record(self, receiver: PlayerId, out: int) -> None:
        # the OT sender learns nothing from a transfer
        if self.network is not None:
            self.network.local(receiver, "ot-output", encode(out))


class GateOp(str, Enum):
    XOR = "XOR"
    AND = "AND"
    NOT = "NOT"


ARITY = {GateOp.XOR: 2, GateOp.AND: 2, GateOp.NOT: 1}


@dataclass(frozen=True)
class Gate:
    op: GateOp
    out: str
    ins: tuple[str, ...]


@dataclass(frozen=True)
class BooleanCircuit:
    inputs: tuple[tuple[PlayerId, str], ...]
    gates: tuple[Gate, ...]
    outputs: tuple[str, ...]

    @property
    def players(self) -> int:
        return max((p for p, _ in self.inputs), default=-1) + 1

    def owner(self, wire: str) -> PlayerId:
        for p, w in self.inputs:
            if w == wire:
                return p
        raise CircuitInvalid(f"{wire!r} is not an input wire")

    def validate(self) -> None:
        defined: set[str] = set()
        for _, wire in self.inputs:
            if wire in defined:
                raise CircuitInvalid(f"wire {wire!r} defined twice")
            defined.add(wire)
        for gate in self.gates:
            if len(gate.ins) != ARITY[gate.op]:
                raise CircuitInvalid(f"{gate.op.value} takes {ARITY[gate.op]} inputs, got {len(gate.ins)}")
            for wire in gate.ins:
                if wire not in defined:
                    raise CircuitInvalid(f"gate {gate.out!r} reads undefined wire {wire!r}")
            if gate.out in defined:
                raise CircuitInvalid(f"wire {gate.out!r} defined twice")
            defined.add(gate.out)
        for wire in self.outputs:
            if wire not in defined:
                raise CircuitInvalid(f"output wire {wire!r} is undefined")
        if not self.outputs:
            raise CircuitInvalid("circuit has no outputs")


_LINE_RE = re.compile(r"\s+")


def parse_circuit(text: str) -> BooleanCircuit:
    """Parse `in <player> <wire>`, `gate XOR|AND|NOT <out> <in1> [<in2>]`, `out <wire>`."""
    inputs, gates, outputs = [], [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = _LINE_RE.split(line)
        if head == "in":
            if len(rest) != 2 or not rest[0].isdigit():
                raise ParseError("expected `in <player> <wire>`", line=lineno)
            inputs.append((int(rest[0]), rest[1]))
        elif head == "gate":
            if len(rest) < 3:
                raise ParseError("expected `gate <op> <out> <in1> [<in2>]`", line=lineno)
            try:
                op = GateOp(rest[0].upper())
            except ValueError:
                raise CircuitInvalid(f"line {lineno}: unknown gate {rest[0]!r}") from None
            gates.append(Gate(op, rest[1], tuple(rest[2:])))
        elif head == "out":
            if len(rest) != 1:
                raise ParseError("expected `out <wire>`", line=lineno)
            outputs.append(rest[0])
        else:
            raise ParseError(f"unknown directive {head!r}", line=lineno)
    circuit = BooleanCircuit(tuple(inputs), tuple(gates), tuple(outputs))
    circuit.validate()
    return circuit


def format_circuit(circuit: BooleanCircuit) -> str:
    lines = [f"in {p} {w}" for p, w in circuit.inputs]
    lines += [f"gate {g.op.value} {g.out} {' '.join(g.ins)}" for g in circuit.gates]
    lines += [f"out {w}" for w in circuit.outputs]
    return "\n".join(lines) + "\n"


def _gate_value(op: GateOp, args: list[int]) -> int:
    if op is GateOp.XOR:
        return args[0] ^ args[1]
    if op is GateOp.AND:
        return args[0] & args[1]
    return 1 - args[0]


def eval_plain(circuit: BooleanCircuit, inputs: Mapping[str, int]) -> tuple[int, ...]:
    circuit.validate()
    values: dict[str, int] = {}
    for _, wire in circuit.inputs:
        if wire not in inputs:
            raise CircuitInvalid(f"no value for input wire {wire!r}")
        values[wire] = int(inputs[wire]) & 1
    for gate in circuit.gates:
        values[gate.out] = _gate_value(gate.op, [values[w] for w in gate.ins])
    return tuple(values[w] for w in circuit.outputs)


@dataclass
class GmwResult:
    outputs: tuple[int, ...]
    and_gates: int = 0
    ot_calls: int = 0
    reversed_ots: int = 0
    messages: int = 0
    network: Network | None = field(default=None, repr=False)

    def view(self, player: PlayerId) -> tuple:
        return self.network.view(1 << player)


def gmw_eval(
    circuit: BooleanCircuit,
    inputs: Mapping[str, int],
    backend: OtBackend | None = None,
    seed: int = 0,
    *,
    rng: RandomSource | None = None,
    orientation: PlayerSet | None = None,
    players: int | None = None,
) -> GmwResult:
    """Evaluate `circuit` on XOR shares; equals eval_plain on every input."""
    circuit.validate()
    n = max(players or 0, circuit.players, 2)
    rng = rng if rng is not None else np.random.default_rng(derive_seed(seed, "gmw"))
    net = Network(n, phase="gmw")
    ot = OtChannels(backend or IdealOT(), orientation=orientation, network=net, rng=rng)
    shares: dict[str, list[int]] = {}

    for owner, wire in circuit.inputs:
        if wire not in inputs:
            raise CircuitInvalid(f"no value for input wire {wire!r}")
        parts = [0] * n
        acc = int(inputs[wire]) & 1
        for p in range(n):
            if p != owner:
                parts[p] = random_bit(rng)
                acc ^= parts[p]
                net.send(owner, p, "input-share", encode(wire, parts[p]))
        parts[owner] = acc
        shares[wire] = parts
    net.next_round()

    and_gates = 0
    for gate in circuit.gates:
        args = [shares[w] for w in gate.ins]
        if gate.op is GateOp.XOR:
            shares[gate.out] = [a ^ b for a, b in zip(*args)]
        elif gate.op is GateOp.NOT:
            shares[gate.out] = [args[0][0] ^ 1] + args[0][1:]
        else:
            and_gates += 1
            a, b = args
            out = [a[p] & b[p] for p in range(n)]
            for i in range(n):
                for j in range(i + 1, n):
                    # i offers sigma xor a_i y xor x b_i; j picks (x, y) = (a_j, b_j)
                    sigma = random_bit(rng)
                    table = tuple(sigma ^ (a[i] & y) ^ (x & b[i]) for x in (0, 1) for y in (0, 1))
                    got = ot4_from_ot2(ot, i, j, table, (a[j], b[j]), rng)
                    out[i] ^= sigma
                    out[j] ^= got
            shares[gate.out] = out
            net.next_round()
        logger.debug(f"gate {gate.op.value} -> {gate.out}")

    for wire in circuit.outputs:
        for p in range(n):
            net.broadcast(p, "output-share", encode(wire, shares[wire][p]))
    net.next_round()
    outputs = tuple(int(np.bitwise_xor.reduce(shares[w])) for w in circuit.outputs)
    net.verdict("evaluated")
    return GmwResult(
        outputs=outputs,
        and_gates=and_gates,
        ot_calls=ot.transfers,
        reversed_ots=ot.reversed,
        messages=len(net.messages),
        network=net,
    )


MAJORITY3 = parse_circuit(
    """
    in 0 a
    in 1 b
    in 2 c
    gate AND ab a b
    gate AND ac a c
    gate AND bc b c
    gate XOR t ab ac
    gate XOR maj t bc
    out maj
    """
)

AND2 = parse_circuit(
    """
    in 0 a
    in 1 b
    gate AND z a b
    out z
    """
)

FULL_ADDER = parse_circuit(
    """
    in 0 a
    in 1 b
    in 2 cin
    gate XOR p a b
    gate XOR sum p cin
    gate AND g a b
    gate AND q p cin
    gate XOR carry g q
    out sum
    out carry
    """
)

BUILTIN_CIRCUITS: dict[str, BooleanCircuit] = {
    "majority3": MAJORITY3,
    "and2": AND2,
    "full-adder": FULL_ADDER,
}


def random_circuit(rng: np.random.Generator, players: int = 3, gates: int = 5) -> BooleanCircuit:
    """Random valid circuit with one input per player; outputs the last two wires."""
    inputs = tuple((p, f"x{p}") for p in range(players))
    wires = [w for _, w in inputs]
    built = []
    for g in range(gates):
        op = list(GateOp)[int(rng.integers(0, 3))]
        ins = tuple(wires[int(i)] for i in rng.integers(0, len(wires), size=ARITY[op]))
        built.append(Gate(op, f"g{g}", ins))
        wires.append(f"g{g}")
    return BooleanCircuit(inputs, tuple(built), tuple(wires[-2:]))

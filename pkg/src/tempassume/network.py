"""Simulated synchronous network with private channels and a broadcast channel.

Every message is logged in send order; the log doubles as the transcript
(`msg <round> <from> <to|broadcast> <kind> <payload-hash>`) and as the source
of coalition views.
"""

import logging
from collections.abc import Iterable
from dataclasses import dataclass, field

import numpy as np

from .structures import PlayerSet
from .utils import payload_hash

logger = logging.getLogger(__name__)

BROADCAST = None


def encode(*parts) -> bytes:
    """Deterministic byte encoding of ints, strings, bit vectors and replica maps."""
    out = bytearray()
    for part in parts:
        if isinstance(part, np.ndarray):
            out += b"b" + len(part).to_bytes(4, "big")
            out += np.packbits(part.astype(np.uint8), bitorder="little").tobytes()
        elif isinstance(part, dict):
            out += b"d" + len(part).to_bytes(4, "big")
            for key in sorted(part):
                out += encode(key, part[key])
        elif isinstance(part, (tuple, list)):
            out += b"t" + len(part).to_bytes(4, "big") + encode(*part)
        elif isinstance(part, (bool, int, np.integer)):
            out += b"i" + int(part).to_bytes(8, "big", signed=True)
        elif isinstance(part, str):
            raw = part.encode()
            out += b"s" + len(raw).to_bytes(4, "big") + raw
        else:
            raise TypeError(f"cannot encode {type(part).__name__}")
    return bytes(out)


@dataclass(frozen=True)
class Message:
    round: int
    src: int
    dst: int | None
    kind: str
    payload: bytes
    phase: str

    def line(self) -> str:
        dst = "broadcast" if self.dst is BROADCAST else str(self.dst)
        return f"msg {self.round} {self.src} {dst} {self.kind} {payload_hash(self.payload)}"


@dataclass
class Network:
    n: int
    round: int = 0
    phase: str = "commit"
    messages: list[Message] = field(default_factory=list)
    lines: list[str] = field(default_factory=list)

    def send(self, src: int, dst: int, kind: str, payload: bytes) -> None:
        msg = Message(self.round, src, dst, kind, payload, self.phase)
        self.messages.append(msg)
        self.lines.append(msg.line())

    def broadcast(self, src: int, kind: str, payload: bytes) -> None:
        msg = Message(self.round, src, BROADCAST, kind, payload, self.phase)
        self.messages.append(msg)
        self.lines.append(msg.line())

    def local(self, player: int, kind: str, payload: bytes) -> None:
        """A value `player` obtains without anyone sending it, such as an OT output."""
        self.send(player, player, kind, payload)

    def next_round(self) -> None:
        self.round += 1

    def enter_phase(self, phase: str) -> None:
        self.phase = phase
        self.next_round()

    def verdict(self, status: str) -> None:
        logger.debug(f"verdict {status}")
        self.lines.append(f"verdict {status}")

    def view(self, coalition: PlayerSet, phases: Iterable[str] | None = None) -> tuple:
        """Everything `coalition` sent, received privately, or saw broadcast."""
        allowed = None if phases is None else set(phases)
        return tuple(
            (m.round, m.src, m.dst, m.kind, m.payload)
            for m in self.messages
            if (allowed is None or m.phase in allowed)
            and (m.dst is BROADCAST or (coalition >> m.dst) & 1 or (coalition >> m.src) & 1)
        )

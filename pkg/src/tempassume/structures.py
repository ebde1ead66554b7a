"""Monotone families of player sets.

Adversary structures (subset-closed) and access structures (superset-closed)
over at most sixteen players. Player sets are integer bitmasks: bit i set
means player i is a member. Families are stored by their extremal sets, which
are kept as a sorted antichain.
"""

import itertools
import logging
import math
import re
from collections.abc import Iterable
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import NotMaximal, ParseError, SizeBound

logger = logging.getLogger(__name__)

MAX_PLAYERS = 16

PlayerId = int
PlayerSet = int


def player_set(players: Iterable[int]) -> PlayerSet:
    s = 0
    for p in players:
        s |= 1 << p
    return s


def players_of(s: PlayerSet) -> tuple[PlayerId, ...]:
    return tuple(i for i in range(s.bit_length()) if (s >> i) & 1)


def full_set(n: int) -> PlayerSet:
    return (1 << n) - 1


def is_subset(a: PlayerSet, b: PlayerSet) -> bool:
    return a & ~b == 0


def format_set(s: PlayerSet) -> str:
    return "{" + ",".join(str(p) for p in players_of(s)) + "}"


class Kind(str, Enum):
    DOWNWARD = "downward"
    UPWARD = "upward"


def _maximal(sets: Iterable[PlayerSet]) -> tuple[PlayerSet, ...]:
    uniq = sorted(set(sets))
    return tuple(s for s in uniq if not any(s != t and is_subset(s, t) for t in uniq))


def _minimal(sets: Iterable[PlayerSet]) -> tuple[PlayerSet, ...]:
    uniq = sorted(set(sets))
    return tuple(s for s in uniq if not any(s != t and is_subset(t, s) for t in uniq))


@dataclass(frozen=True)
class MonotoneFamily:
    n: int
    kind: Kind
    extremal: tuple[PlayerSet, ...]

    @classmethod
    def of(cls, n: int, kind: Kind, sets: Iterable[PlayerSet]) -> "MonotoneFamily":
        """Canonicalize `sets` into the antichain of extremal sets.

        Dominated and duplicate inputs are absorbed. A subset-closed family
        always contains the empty set.
        """
        if n > MAX_PLAYERS:
            raise SizeBound(f"{n} players exceed the supported maximum of {MAX_PLAYERS}")
        if n < 0:
            raise ValueError(f"player count must be nonnegative, got {n}")
        sets = list(sets)
        for s in sets:
            if s < 0 or not is_subset(s, full_set(n)):
                raise ValueError(f"set {s:#x} is not a subset of the {n} players")
        if kind is Kind.DOWNWARD:
            extremal = _maximal(sets) or (0,)
        else:
            extremal = _minimal(sets)
        return cls(n=n, kind=kind, extremal=extremal)

    @classmethod
    def downward(cls, n: int, sets: Iterable[PlayerSet]) -> "MonotoneFamily":
        return cls.of(n, Kind.DOWNWARD, sets)

    @classmethod
    def upward(cls, n: int, sets: Iterable[PlayerSet]) -> "MonotoneFamily":
        return cls.of(n, Kind.UPWARD, sets)

    @property
    def full(self) -> PlayerSet:
        return full_set(self.n)

    def __contains__(self, s: PlayerSet) -> bool:
        return contains(self, s)

    def __str__(self) -> str:
        return format_structure(self)


def _require(f: MonotoneFamily, kind: Kind, op: str) -> None:
    if f.kind is not kind:
        raise ValueError(f"{op} expects a {kind.value} family, got {f.kind.value}")


def contains(f: MonotoneFamily, s: PlayerSet) -> bool:
    if f.kind is Kind.DOWNWARD:
        return any(is_subset(s, e) for e in f.extremal)
    return any(is_subset(e, s) for e in f.extremal)


def membership_table(f: MonotoneFamily) -> np.ndarray:
    """Boolean membership indicator indexed by every bitmask over f's players."""
    masks = np.arange(1 << f.n, dtype=np.int64)
    table = np.zeros(masks.shape, dtype=bool)
    for e in f.extremal:
        if f.kind is Kind.DOWNWARD:
            table |= (masks & ~e) == 0
        else:
            table |= (masks & e) == e
    return table


def members(f: MonotoneFamily) -> list[PlayerSet]:
    return [int(s) for s in np.flatnonzero(membership_table(f))]


def threshold_structure(n: int, t: int) -> MonotoneFamily:
    if n > MAX_PLAYERS:
        raise SizeBound(f"{n} players exceed the supported maximum of {MAX_PLAYERS}")
    if not 0 <= t <= n:
        raise ValueError(f"threshold requires 0 <= t <= n, got n={n}, t={t}")
    return MonotoneFamily.downward(n, (player_set(c) for c in itertools.combinations(range(n), t)))


def two_sets_cover(a: MonotoneFamily, target: PlayerSet) -> tuple[PlayerSet, PlayerSet] | None:
    """Find two members of `a` whose union covers `target`.

    By monotonicity only extremal sets need checking.
    """
    _require(a, Kind.DOWNWARD, "two_sets_cover")
    for x, y in itertools.combinations_with_replacement(a.extremal, 2):
        if is_subset(target, x | y):
            return (x, y)
    return None


def exhaustive_cover(a: MonotoneFamily, target: PlayerSet) -> tuple[PlayerSet, PlayerSet] | None:
    """Brute-force variant of two_sets_cover over all member pairs."""
    _require(a, Kind.DOWNWARD, "exhaustive_cover")
    sets = members(a)
    for x, y in itertools.combinations_with_replacement(sets, 2):
        if is_subset(target, x | y):
            return (x, y)
    return None


def partially_robust_admissible(a: MonotoneFamily) -> bool:
    return two_sets_cover(a, a.full) is None


def robust_admissible(a: MonotoneFamily) -> bool:
    _require(a, Kind.DOWNWARD, "robust_admissible")
    return all(two_sets_cover(a, a.full & ~(1 << i)) is None for i in range(a.n))


def dual_access(f: MonotoneFamily) -> MonotoneFamily:
    """Complement every extremal set and flip the closure direction.

    For an adversary structure this yields the access structure
    {Z | Z^c in A}; applied twice it is the identity.
    """
    kind = Kind.UPWARD if f.kind is Kind.DOWNWARD else Kind.DOWNWARD
    return MonotoneFamily.of(f.n, kind, (f.full & ~e for e in f.extremal))


def max_unqualified(z: MonotoneFamily) -> list[PlayerSet]:
    """Maximal sets outside the access structure `z`.

    Returns an empty list when the empty set is qualified.
    """
    _require(z, Kind.UPWARD, "max_unqualified")
    if contains(z, 0):
        logger.debug("access structure qualifies the empty set; no unqualified sets")
        return []
    qualified = membership_table(z)
    masks = np.arange(1 << z.n, dtype=np.int64)
    maximal = ~qualified
    for i in range(z.n):
        bit = 1 << i
        maximal &= ((masks & bit) != 0) | qualified[masks | bit]
    return [int(s) for s in np.flatnonzero(maximal)]


def post_termination_secure(a: MonotoneFamily, m: PlayerSet) -> MonotoneFamily:
    """Structure tolerable after termination: {A^c | A not in a} plus M^c.

    {A^c | A not in a} is exactly the family of sets unqualified in
    dual_access(a), so its maximal sets come from max_unqualified.
    """
    _require(a, Kind.DOWNWARD, "post_termination_secure")
    if m not in a.extremal:
        raise NotMaximal(f"{format_set(m)} is not a maximal set of {format_structure(a)}")
    sets = max_unqualified(dual_access(a))
    sets.append(a.full & ~m)
    return MonotoneFamily.downward(a.n, sets)


def is_subfamily(f: MonotoneFamily, g: MonotoneFamily) -> bool:
    return all(contains(g, e) for e in f.extremal)


def admissible_post_witness(a: MonotoneFamily, post: MonotoneFamily) -> PlayerSet | None:
    _require(post, Kind.DOWNWARD, "is_admissible_post_structure")
    if post.n != a.n:
        raise ValueError(f"player counts differ: {a.n} vs {post.n}")
    for m in a.extremal:
        if is_subfamily(post, post_termination_secure(a, m)):
            return m
    return None


def is_admissible_post_structure(a: MonotoneFamily, post: MonotoneFamily) -> bool:
    return admissible_post_witness(a, post) is not None


def post_termination_robust(post: MonotoneFamily) -> MonotoneFamily:
    _require(post, Kind.DOWNWARD, "post_termination_robust")
    sets = [e & ~(1 << i) for e in post.extremal for i in players_of(e)]
    return MonotoneFamily.downward(post.n, sets)


def tradeoff_admissible(a: MonotoneFamily, a_tilde: MonotoneFamily) -> PlayerSet | None:
    """Maximal set B of `a` witnessing the robust/secure trade-off, if any.

    Requires `a` robust-admissible and every member of `a_tilde` inside the
    complement of B.
    """
    if not robust_admissible(a):
        return None
    for b in a.extremal:
        if all(is_subset(e, a.full & ~b) for e in a_tilde.extremal):
            return b
    return None


def choose_direction(pair: tuple[PlayerId, PlayerId], m: PlayerSet) -> tuple[PlayerId, PlayerId]:
    """Orient a commitment so that the sender is outside M or the receiver inside it."""
    x, y = pair
    if x == y:
        raise ValueError(f"a commitment needs two distinct players, got ({x}, {y})")
    x_out = not (m >> x) & 1
    y_out = not (m >> y) & 1
    if y_out and not x_out:
        return (y, x)
    return (x, y)


_THRESHOLD_RE = re.compile(r"^\s*threshold\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")
_SETS_RE = re.compile(r"^\s*sets\(\s*(\d+)\s*;(.*)\)\s*$")


def parse_structure(text: str) -> MonotoneFamily:
    """Parse `threshold(n,t)` or `sets(n; 0 1, 2 3)` into an adversary structure."""
    if match := _THRESHOLD_RE.match(text):
        n, t = int(match.group(1)), int(match.group(2))
        if t > n:
            raise ParseError(f"threshold t={t} exceeds n={n}")
        return threshold_structure(n, t)
    if match := _SETS_RE.match(text):
        n = int(match.group(1))
        sets = []
        for group in match.group(2).split(","):
            try:
                players = [int(tok) for tok in group.split()]
            except ValueError:
                raise ParseError(f"non-integer player in {group.strip()!r}")
            if any(p >= n for p in players):
                raise ParseError(f"player out of range in {group.strip()!r} for n={n}")
            sets.append(player_set(players))
        return MonotoneFamily.downward(n, sets)
    raise ParseError(f"unrecognized structure literal {text!r}")


def format_structure(f: MonotoneFamily) -> str:
    if f.kind is Kind.DOWNWARD:
        sizes = {bin(e).count("1") for e in f.extremal}
        if len(sizes) == 1:
            t = sizes.pop()
            if len(f.extremal) == math.comb(f.n, t):
                return f"threshold({f.n},{t})"
        head = "sets"
    else:
        head = "access"
    groups = ", ".join(" ".join(str(p) for p in players_of(e)) for e in f.extremal)
    return f"{head}({f.n}; {groups})"

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .commit import PARTIAL_CONDITION, ROBUST_CONDITION, StrategyProfile, parse_strategy
from .errors import InadmissibleStructure, ParseError, SimulationError
from .structures import (
    MonotoneFamily,
    PlayerSet,
    choose_direction,
    format_set,
    format_structure,
    parse_structure,
    partially_robust_admissible,
    player_set,
    robust_admissible,
)

logger = logging.getLogger(__name__)


class ProtocolKind(str, Enum):
    STRUCTURE_CHECK = "structure-check"
    VSS = "vss"
    COMMIT_PARTIAL = "commit-partial"
    COMMIT_ROBUST = "commit-robust"
    BB84_OT = "bb84-ot"
    GMW = "gmw"
    ATTACK_DEMO = "attack-demo"


COMMIT_PROTOCOLS = (ProtocolKind.COMMIT_PARTIAL, ProtocolKind.COMMIT_ROBUST)


class Scenario(BaseModel):
    """A declarative experiment: structure, protocol, strategies and trial count."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = "unnamed"
    protocol: ProtocolKind
    structure: str = "threshold(3,1)"
    trials: int = Field(default=1, ge=1)
    seed: int = 0

    # commitment
    sender: int = 0
    receiver: int = 1
    maximal: list[int] | None = None
    message: int = 1
    length: int = Field(default=1, ge=1)
    k: int = Field(default=8, ge=0)
    strategies: dict[int, str] = Field(default_factory=dict)
    after_commit: list[int] | None = None
    checks: list[str] = Field(default_factory=list)

    # vss
    misdealt: int | None = None

    # bb84
    positions: int = 128
    alpha: float = 0.5
    attack: str = "none"
    forcing: bool = True
    choice: int = 1
    payload: tuple[int, int] = (1, 0)

    # gmw
    circuit: str = "majority3"
    backend: str = "ideal"
    inputs: dict[str, int] | None = None

    # attack demo
    demo: str = "entangling"

    def adversary(self) -> MonotoneFamily:
        return parse_structure(self.structure)

    def strategy_profile(self) -> StrategyProfile:
        return StrategyProfile.of({p: parse_strategy(text) for p, text in self.strategies.items()})

    def maximal_set(self) -> PlayerSet | None:
        return None if self.maximal is None else player_set(self.maximal)

    def with_overrides(self, **changes) -> "Scenario":
        changes = {k: v for k, v in changes.items() if v is not None}
        return self.model_copy(update=changes) if changes else self


_LIST_KEYS = {"maximal", "after_commit"}
_WORD_LIST_KEYS = {"checks"}
_BOOL_WORDS = {"yes": True, "true": True, "on": True, "no": False, "false": False, "off": False}


def _value(key: str, raw: str, lineno: int):
    if key in _LIST_KEYS:
        try:
            return [int(tok) for tok in raw.replace(",", " ").split()]
        except ValueError:
            raise ParseError(f"{key} expects player indices, got {raw!r}", line=lineno) from None
    if key in _WORD_LIST_KEYS:
        return raw.replace(",", " ").split()
    if key == "forcing":
        if raw.lower() not in _BOOL_WORDS:
            raise ParseError(f"forcing expects yes/no, got {raw!r}", line=lineno)
        return _BOOL_WORDS[raw.lower()]
    if key == "payload":
        return tuple(raw.replace(",", " ").split())
    if key == "inputs":
        pairs = {}
        for tok in raw.split():
            wire, sep, bit = tok.partition("=")
            if not sep:
                raise ParseError(f"inputs expect wire=bit pairs, got {tok!r}", line=lineno)
            pairs[wire] = bit
        return pairs
    return raw


def load_scenario(text: str) -> Scenario:
    """Parse `key: value` lines into a validated Scenario.

    `strategy: <player> <strategy...>` may repeat. Structure admissibility is
    checked against the protocol before anything runs.
    """
    fields: dict = {}
    lines: dict[str, int] = {}
    strategies: dict[int, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        key, value = key.strip().replace("-", "_"), value.strip()
        if not sep or not key:
            raise ParseError(f"expected `key: value`, got {line!r}", line=lineno)
        if key == "strategy":
            player, _, desc = value.partition(" ")
            if not player.isdigit() or not desc.strip():
                raise ParseError("expected `strategy: <player> <strategy>`", line=lineno)
            try:
                parse_strategy(desc)
            except ParseError as e:
                raise ParseError(e.message, line=lineno) from None
            strategies[int(player)] = desc.strip()
            lines["strategies"] = lineno
            continue
        if key not in Scenario.model_fields:
            raise ParseError(f"unknown key {key!r}", line=lineno)
        if key in fields:
            raise ParseError(f"duplicate key {key!r}", line=lineno)
        fields[key] = _value(key, value, lineno)
        lines[key] = lineno
    if strategies:
        fields["strategies"] = strategies

    try:
        scenario = Scenario.model_validate(fields)
    except ValidationError as e:
        first = e.errors()[0]
        key = str(first["loc"][0]) if first["loc"] else ""
        raise ParseError(f"{key}: {first['msg']}", line=lines.get(key)) from None

    try:
        validate_scenario(scenario)
    except ParseError as e:
        raise ParseError(e.message, line=lines.get("structure")) from None
    return scenario


def validate_scenario(scenario: Scenario) -> None:
    """Check the preconditions of the scenario's protocol."""
    adversary = scenario.adversary()
    n = adversary.n
    if scenario.protocol is ProtocolKind.COMMIT_PARTIAL and not partially_robust_admissible(adversary):
        raise InadmissibleStructure(
            f"{format_structure(adversary)} cannot run the partially robust commitment: {PARTIAL_CONDITION}",
            condition=PARTIAL_CONDITION,
        )
    if scenario.protocol is ProtocolKind.COMMIT_ROBUST and not robust_admissible(adversary):
        raise InadmissibleStructure(
            f"{format_structure(adversary)} cannot run the robust commitment: {ROBUST_CONDITION}",
            condition=ROBUST_CONDITION,
        )
    if scenario.protocol in COMMIT_PROTOCOLS:
        for p in (scenario.sender, scenario.receiver, *scenario.strategies):
            if not 0 <= p < n:
                raise SimulationError(f"player {p} out of range for n={n}")
        if scenario.sender == scenario.receiver:
            raise SimulationError("sender and receiver must differ")
        scenario.strategy_profile().validate(adversary)
    if scenario.maximal is not None and scenario.maximal_set() not in adversary.extremal:
        raise SimulationError(f"maximal set {scenario.maximal} is not maximal in {format_structure(adversary)}")
    if scenario.protocol in COMMIT_PROTOCOLS and scenario.maximal is not None:
        pair = (scenario.sender, scenario.receiver)
        m = scenario.maximal_set()
        if choose_direction(pair, m) != pair:
            raise SimulationError(
                f"sender {scenario.sender} in M={format_set(m)} may not commit to receiver {scenario.receiver} "
                f"outside it; swap sender and receiver"
            )


@dataclass
class ScenarioSpec:
    name: str
    description: str
    criterion: str
    build: Callable[[], Scenario] = field(repr=False)


SCENARIO_REGISTRY: list[ScenarioSpec] = []


def scenario(*, name: str, description: str, criterion: str = ""):
    def decorator(fn: Callable[[], Scenario]):
        SCENARIO_REGISTRY.append(ScenarioSpec(name=name, description=description, criterion=criterion, build=fn))
        return fn

    return decorator


def get_scenario(name: str) -> Scenario:
    for spec in SCENARIO_REGISTRY:
        if spec.name == name:
            return spec.build()
    raise SimulationError(f"No scenario registered under {name!r}")

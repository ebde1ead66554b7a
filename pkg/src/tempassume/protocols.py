"""Trial runners, one per protocol kind.

A runner turns (scenario, trial index, trial seed) into a TrialOutcome and
summarizes all outcomes into aggregates and checks. Protocol errors inside a
trial become that trial's verdict.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, ClassVar

import numpy as np

from .checks import (
    AllTrialsPassCheck,
    CheckResult,
    ConditionCheck,
    FrequencyCheck,
    MinimumRateCheck,
    UpperBoundCheck,
)
from .commit import (
    BitTape,
    CoalitionReconstructor,
    CommitTemplate,
    Phase,
    SecretSharingCommitment,
    Status,
    StrategyProfile,
    UnveilFlipper,
    Variant,
    attempt_reconstruction,
    coalition_view_distributions,
    commit,
    unveil,
)
from .mpc import BUILTIN_CIRCUITS, Bb84OT, IdealOT, eval_plain, gmw_eval, parse_circuit
from .quantum.attacks import TOY_PROTOCOLS, mayers_attack_demo, third_party_demo
from .quantum.bb84 import Attack, Bb84Verdict, bb84_ot, default_adversary, detection_probability
from .scenario import ProtocolKind, Scenario
from .sharing import DealerBehavior, bits_from_int, random_bits, vss_deal
from .structures import (
    MonotoneFamily,
    PlayerSet,
    choose_direction,
    dual_access,
    exhaustive_cover,
    format_set,
    format_structure,
    max_unqualified,
    members,
    partially_robust_admissible,
    player_set,
    post_termination_secure,
    robust_admissible,
)
from .utils import make_rng

logger = logging.getLogger(__name__)


@dataclass
class TrialOutcome:
    index: int
    verdict: str
    passed: bool
    events: list[str] = field(default_factory=list)
    metrics: dict[str, float] = field(default_factory=dict)
    lines: list[str] = field(default_factory=list)


class ProtocolRunner:
    kind: ClassVar[ProtocolKind]

    @classmethod
    def trial(cls, scenario: Scenario, index: int, seed: int) -> TrialOutcome:
        raise NotImplementedError("Subclasses must implement trial")

    @classmethod
    def summarize(cls, scenario: Scenario, outcomes: list[TrialOutcome]) -> tuple[dict[str, Any], list[CheckResult]]:
        passed = sum(o.passed for o in outcomes)
        return {}, [AllTrialsPassCheck.grade(passed=passed, trials=len(outcomes))]


PROTOCOL_RUNNERS: dict[ProtocolKind, type[ProtocolRunner]] = {}


def protocol_runner(kind: ProtocolKind):
    def decorator(cls: type[ProtocolRunner]):
        cls.kind = kind
        PROTOCOL_RUNNERS[kind] = cls
        return cls

    return decorator


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


@protocol_runner(ProtocolKind.STRUCTURE_CHECK)
class StructureCheckRunner(ProtocolRunner):
    @classmethod
    def trial(cls, scenario: Scenario, index: int, seed: int) -> TrialOutcome:
        a = scenario.adversary()
        partial = partially_robust_admissible(a)
        robust = robust_admissible(a)
        partial_exhaustive = exhaustive_cover(a, a.full) is None
        robust_exhaustive = all(exhaustive_cover(a, a.full & ~(1 << i)) is None for i in range(a.n))
        verdict = f"partial: {_yes(partial)}, robust: {_yes(robust)}"
        lines = [
            f"structure: {format_structure(a)}",
            verdict,
            f"access structure: {format_structure(dual_access(a))}",
            "replica tags: " + " ".join(format_set(t) for t in max_unqualified(dual_access(a))),
        ]
        m = scenario.maximal_set()
        if m is not None:
            lines.append(f"after termination (M={format_set(m)}): {format_structure(post_termination_secure(a, m))}")
        return TrialOutcome(
            index=index,
            verdict=verdict,
            passed=partial == partial_exhaustive and robust == robust_exhaustive,
            events=lines,
            metrics={"partial": float(partial), "robust": float(robust)},
            lines=lines,
        )


@protocol_runner(ProtocolKind.VSS)
class VssRunner(ProtocolRunner):
    """Cut-and-choose soundness: how often a misdealing dealer passes k rounds."""

    @classmethod
    def trial(cls, scenario: Scenario, index: int, seed: int) -> TrialOutcome:
        access = dual_access(scenario.adversary())
        rng = make_rng(seed, "dealer")
        dealer = DealerBehavior.honest()
        if scenario.misdealt is not None:
            victim = scenario.misdealt
            tag = next(t for t in max_unqualified(access) if not (t >> victim) & 1)
            dealer = DealerBehavior.misdealing((victim, tag))
        secret = random_bits(rng, scenario.length)
        _, transcript, verdict = vss_deal(
            secret, access, scenario.k, rng, dealer=dealer, verifier_rng=make_rng(seed, "verifier")
        )
        label = "accepted" if verdict.accepted else f"rejected@{verdict.round}"
        honest_ok = scenario.misdealt is not None or verdict.accepted
        return TrialOutcome(
            index=index,
            verdict=label,
            passed=honest_ok,
            events=[f"round {r.index} challenge {r.challenge} complaints {format_set(r.complainers)}" for r in transcript.rounds],
            metrics={"accepted": float(verdict.accepted)},
        )

    @classmethod
    def summarize(cls, scenario, outcomes):
        accepted = sum(o.verdict == "accepted" for o in outcomes)
        aggregates = {"acceptance_frequency": accepted / len(outcomes)}
        if scenario.misdealt is None:
            return aggregates, [AllTrialsPassCheck.grade(passed=accepted, trials=len(outcomes))]
        bound = 2.0 ** -scenario.k
        aggregates["soundness_bound"] = bound
        return aggregates, [UpperBoundCheck.grade(label="soundness", hits=accepted, trials=len(outcomes), bound=bound)]


def _commit_expectation(scenario: Scenario, session, result) -> bool:
    """Whether one commitment trial behaved as the protocol guarantees."""
    profile = session.strategies
    sender_strategy = profile.of_player(scenario.sender)
    m = session.payload
    if result is not None and result.accepted and not np.array_equal(result.value, m):
        return False
    if session.variant is Variant.ROBUST and sender_strategy.honest:
        if session.status is Status.ABORTED:
            return session.reason == "pair-conflict" and not profile.of_player(scenario.receiver).honest
        if session.status is Status.DEALER_CAUGHT:
            return False
        if session.iterations > session.n + 1:
            return False
    if session.status in (Status.ABORTED, Status.DEALER_CAUGHT):
        return bool(profile.cheaters())
    if result is not None and not result.accepted:
        return not sender_strategy.honest
    return True


@protocol_runner(ProtocolKind.COMMIT_PARTIAL)
class CommitRunner(ProtocolRunner):
    variant: ClassVar[Variant] = Variant.PARTIAL

    @classmethod
    def trial(cls, scenario: Scenario, index: int, seed: int) -> TrialOutcome:
        a = scenario.adversary()
        m = bits_from_int(scenario.message, scenario.length)
        session = commit(
            cls.variant, m, scenario.sender, scenario.receiver, a, scenario.k,
            scenario.strategy_profile(), seed,
        )
        metrics = {"iterations": float(session.iterations), "complainers": float(bin(session.complaint_set).count("1"))}
        lines = []
        ok = True
        if scenario.after_commit is not None and session.status is Status.COMMITTED:
            coalition = player_set(scenario.after_commit)
            learned = attempt_reconstruction(session, coalition)
            metrics["after_commit_learned"] = float(learned is not None)
            holds_sender = bool((coalition >> scenario.sender) & 1)
            lines.append(
                f"after-commit coalition {format_set(coalition)}: "
                + ("holds the sender" if holds_sender else "learns m" if learned is not None else "learns nothing")
            )
            if not holds_sender and learned is not None:
                ok = False
        result = unveil(session) if session.status is Status.COMMITTED else None
        label = session.status.value if session.reason is None else f"{session.status.value}({session.reason})"
        if result is not None:
            label = result.describe() if result.accepted else "rejected(flip)"
        ok = ok and _commit_expectation(scenario, session, result)
        return TrialOutcome(index=index, verdict=label, passed=ok, events=list(session.network.lines), metrics=metrics, lines=lines)

    @classmethod
    def summarize(cls, scenario, outcomes):
        aggregates, checks = super().summarize(scenario, outcomes)
        aggregates["max_iterations"] = max(o.metrics.get("iterations", 0.0) for o in outcomes)
        if "concealing" in scenario.checks:
            detail, exact, skipped = concealment(scenario, cls.variant)
            aggregates["concealing"] = "exact" if exact else "violated"
            aggregates["concealing_coalitions"] = detail
            aggregates["concealing_skipped"] = skipped
            checks.append(ConditionCheck.grade(label="concealing", holds=exact, detail=detail))
        if "binding" in scenario.checks:
            attempts, rejected = binding_attempts(scenario, cls.variant)
            aggregates["flip_attempts"] = attempts
            aggregates["flips_rejected"] = rejected
            checks.append(ConditionCheck.grade(label="binding", holds=attempts == rejected and attempts > 0))
        return aggregates, checks


@protocol_runner(ProtocolKind.COMMIT_ROBUST)
class RobustCommitRunner(CommitRunner):
    variant: ClassVar[Variant] = Variant.ROBUST


def oriented_maximal(a: MonotoneFamily, sender: int, receiver: int) -> PlayerSet | None:
    """First maximal set M for which sender -> receiver is a permitted orientation."""
    for m in a.extremal:
        if choose_direction((sender, receiver), m) == (sender, receiver):
            return m
    return None


def concealment(scenario: Scenario, variant: Variant) -> tuple[str, bool, list[str]]:
    """Exact view-distribution equality for every coalition that must learn nothing.

    Coalitions: members of the adversary structure and of the structure
    tolerated after termination, excluding the sender. In the robust variant
    a coalition holding the receiver's mask that completes the replicas only
    with the published ones is skipped and reported. One enumeration at the
    after-commit phase covers the during-commit views, which are prefixes of it.
    """
    a = scenario.adversary()
    profile = scenario.strategy_profile()
    template = CommitTemplate(variant, a, scenario.sender, scenario.receiver, k=scenario.k, strategies=profile)
    sample = template.run(np.zeros(1, dtype=np.uint8), BitTape())
    if sample.published_covers_secret():
        return "published replicas reveal m xor r", False, []
    published = set(sample.published)
    all_tags = set(sample.bundle.tags)

    m = scenario.maximal_set() if scenario.maximal is not None else oriented_maximal(a, scenario.sender, scenario.receiver)
    candidates = set(members(a))
    if m is not None:
        candidates |= set(members(post_termination_secure(a, m)))
    coalitions, skipped = [], []
    for c in sorted(candidates):
        if (c >> scenario.sender) & 1:
            continue
        held = sample.bundle.tags_held_by(c)
        if (
            variant is Variant.ROBUST
            and (c >> scenario.receiver) & 1
            and not held >= all_tags
            and held | published >= all_tags
        ):
            skipped.append(format_set(c))
            continue
        coalitions.append(c)
    dists = coalition_view_distributions(template, coalitions, Phase.AFTER_COMMIT)
    broken = [format_set(c) for c, d in dists.items() if not d.identical]
    exact = not broken
    detail = f"{len(coalitions)} coalitions" + ("" if exact else "; differ: " + " ".join(broken))
    logger.info(f"concealment over {len(coalitions)} coalitions: {'exact' if exact else 'violated'}")
    return detail, exact, skipped


BINDING_SEEDS = 8


def binding_attempts(scenario: Scenario, variant: Variant) -> tuple[int, int]:
    """Every adversary coalition holding the sender tries to flip either bit."""
    a = scenario.adversary()
    attempts = rejected = 0
    for c in members(a):
        if not (c >> scenario.sender) & 1:
            continue
        for m in (0, 1):
            mapping = {p: CoalitionReconstructor(coalition=c) for p in range(a.n) if (c >> p) & 1}
            mapping[scenario.sender] = UnveilFlipper(target=1 - m)
            profile = StrategyProfile.of(mapping)
            for seed in range(BINDING_SEEDS):
                session = commit(
                    variant, np.array([m], dtype=np.uint8), scenario.sender, scenario.receiver, a,
                    scenario.k, profile, seed,
                )
                if session.status is not Status.COMMITTED:
                    continue
                attempts += 1
                rejected += not unveil(session).accepted
    return attempts, rejected


def _ot_backend(scenario: Scenario) -> SecretSharingCommitment:
    return SecretSharingCommitment(default_adversary(), k=scenario.k)


@protocol_runner(ProtocolKind.BB84_OT)
class Bb84Runner(ProtocolRunner):
    @classmethod
    def trial(cls, scenario: Scenario, index: int, seed: int) -> TrialOutcome:
        b0, b1 = scenario.payload
        attack = Attack(scenario.attack)
        session = bb84_ot(
            b0, b1, scenario.choice, scenario.positions, scenario.alpha, _ot_backend(scenario),
            attack, seed, forcing=scenario.forcing,
        )
        metrics = {"tested": float(len(session.test_set)), "detected": float(session.verdict is Bb84Verdict.ABORT_CHEAT_DETECTED)}
        if attack is Attack.NONE:
            accepted = session.verdict is Bb84Verdict.ACCEPT
            metrics["wrong_output"] = float(accepted and session.output != (b0, b1)[scenario.choice])
            passed = (accepted and not metrics["wrong_output"]) or session.verdict is Bb84Verdict.ABORT_TOO_FEW_GOOD
        elif not scenario.forcing:
            passed = session.recovered == (b0, b1)
            metrics["recovered_both"] = float(passed)
        else:
            passed = True
        return TrialOutcome(index=index, verdict=session.verdict.value, passed=passed, events=list(session.network.lines), metrics=metrics)

    @classmethod
    def summarize(cls, scenario, outcomes):
        trials = len(outcomes)
        verdicts = Counter(o.verdict for o in outcomes)
        passed = sum(o.passed for o in outcomes)
        checks = [AllTrialsPassCheck.grade(passed=passed, trials=trials)]
        aggregates: dict[str, Any] = {}
        if Attack(scenario.attack) is Attack.NONE:
            accepted = verdicts[Bb84Verdict.ACCEPT.value]
            too_few = verdicts[Bb84Verdict.ABORT_TOO_FEW_GOOD.value]
            wrong = int(sum(o.metrics.get("wrong_output", 0.0) for o in outcomes))
            aggregates.update(acceptance_frequency=accepted / trials, too_few_good=too_few, wrong_outputs=wrong)
            checks.append(ConditionCheck.grade(label="correctness", holds=wrong == 0, detail=f"{wrong} accepted runs missed b_c"))
            checks.append(
                ConditionCheck.grade(label="completeness", holds=accepted + too_few == trials, detail=f"{too_few} too-few-good aborts")
            )
            # too-few-good is a sampling event, rare at the default sizes
            checks.append(MinimumRateCheck.grade(label="acceptance", hits=accepted, trials=trials, minimum=0.998))
        elif scenario.forcing:
            detected = verdicts[Bb84Verdict.ABORT_CHEAT_DETECTED.value]
            tested = int(outcomes[0].metrics.get("tested", 0.0))
            expected = detection_probability(tested)
            aggregates.update(detection_frequency=detected / trials, expected_detection=expected, tested=tested)
            checks.append(FrequencyCheck.grade(label="detection", hits=detected, trials=trials, expected=expected))
        else:
            aggregates["recovered_both_frequency"] = passed / trials
        return aggregates, checks


def load_circuit(spec: str):
    if spec in BUILTIN_CIRCUITS:
        return BUILTIN_CIRCUITS[spec]
    return parse_circuit(Path(spec).read_text())


@protocol_runner(ProtocolKind.GMW)
class GmwRunner(ProtocolRunner):
    @classmethod
    def trial(cls, scenario: Scenario, index: int, seed: int) -> TrialOutcome:
        circuit = load_circuit(scenario.circuit)
        if scenario.inputs is not None:
            inputs = dict(scenario.inputs)
        else:
            rng = make_rng(seed, "inputs")
            inputs = {w: int(rng.integers(0, 2)) for _, w in circuit.inputs}
        backend = Bb84OT(seed=seed, backend=_ot_backend(scenario)) if scenario.backend == "bb84" else IdealOT()
        result = gmw_eval(circuit, inputs, backend, seed, orientation=scenario.maximal_set())
        expected = eval_plain(circuit, inputs)
        bits = " ".join(str(b) for b in result.outputs)
        return TrialOutcome(
            index=index,
            verdict=f"outputs {bits}",
            passed=result.outputs == expected,
            events=list(result.network.lines),
            metrics={
                "and_gates": float(result.and_gates),
                "ot_calls": float(result.ot_calls),
                "reversed_ots": float(result.reversed_ots),
                "messages": float(result.messages),
            },
        )

    @classmethod
    def summarize(cls, scenario, outcomes):
        aggregates, checks = super().summarize(scenario, outcomes)
        aggregates["ot_calls_per_run"] = outcomes[0].metrics.get("ot_calls", 0.0)
        aggregates["and_gates"] = outcomes[0].metrics.get("and_gates", 0.0)
        return aggregates, checks


@protocol_runner(ProtocolKind.ATTACK_DEMO)
class AttackDemoRunner(ProtocolRunner):
    @classmethod
    def trial(cls, scenario: Scenario, index: int, seed: int) -> TrialOutcome:
        if scenario.demo == "third-party":
            report = third_party_demo()
            lines = report.lines()
            ok = (
                report.joins_bob.certified.value == "distinguishable"
                and report.joins_alice.certified.value == "flippable"
            )
            verdict = "third party breaks both properties" if ok else "inconclusive"
            return TrialOutcome(index=index, verdict=verdict, passed=ok, events=lines, lines=lines)
        if scenario.demo not in TOY_PROTOCOLS:
            raise ValueError(f"unknown demo {scenario.demo!r}")
        report = mayers_attack_demo(scenario.demo)
        lines = report.lines()
        metrics = {"trace_distance": report.trace_distance}
        if report.flip_fidelity is not None:
            metrics["flip_fidelity"] = report.flip_fidelity
        return TrialOutcome(index=index, verdict=report.certified.value, passed=True, events=lines, metrics=metrics, lines=lines)

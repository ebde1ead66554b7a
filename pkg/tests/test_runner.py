import json

import pytest
from scipy.stats import binomtest

import tempassume.scenarios
from tempassume.commit import Variant
from tempassume.errors import SimulationError
from tempassume.protocols import concealment
from tempassume.report import ReportFormat, parse_structured, render_junit, render_text, report
from tempassume.runner import ScenarioRunner, run_scenario
from tempassume.scenario import ProtocolKind, Scenario, get_scenario, load_scenario, validate_scenario
from tempassume.utils import derive_seed, import_submodules

import_submodules(tempassume.scenarios)


def test_derive_seed_depends_only_on_path():
    assert derive_seed(7, "x", 3) == derive_seed(7, "x", 3)
    assert derive_seed(7, "x", 3) != derive_seed(7, "x", 4)
    assert derive_seed(7, "x", 3) != derive_seed(8, "x", 3)


def test_structure_check():
    transcript = run_scenario(get_scenario("structure-threshold-4-1"))
    assert transcript.passed
    assert transcript.verdict_counts == {"partial: yes, robust: yes": 1}
    assert any(note.startswith("after termination (M={3})") for note in transcript.notes)


def test_structure_check_of_two_pairs():
    transcript = run_scenario(get_scenario("structure-two-pairs"))
    assert transcript.verdict_counts == {"partial: no, robust: no": 1}


def test_honest_vss():
    transcript = run_scenario(get_scenario("vss-honest").with_overrides(trials=50))
    assert transcript.passed
    assert transcript.aggregates["acceptance_frequency"] == 1.0


def test_vss_soundness_frequency():
    scenario = load_scenario("protocol: vss\nk: 1\nmisdealt: 2\ntrials: 600\n")
    transcript = run_scenario(scenario)
    assert transcript.aggregates["soundness_bound"] == 0.5
    assert 0.35 < transcript.aggregates["acceptance_frequency"] < 0.65


def test_temporary_assumption_scenario():
    transcript = run_scenario(get_scenario("temporary-assumption").with_overrides(trials=5))
    assert transcript.passed
    assert transcript.aggregates["concealing"] == "exact"
    assert "after-commit coalition {0,1}: holds the sender" in transcript.notes
    assert transcript.verdict_counts == {"accepted 1": 5}


def test_flip_scenario_is_always_rejected():
    transcript = run_scenario(get_scenario("commit-flip").with_overrides(trials=5))
    assert transcript.passed
    assert transcript.verdict_counts == {"rejected(flip)": 5}
    binding = next(c for c in transcript.checks if c.name == "binding")
    assert binding.passed


def test_leaked_copies_let_the_receiver_reconstruct():
    scenario = load_scenario(
        """
        name: leak
        protocol: commit-partial
        structure: threshold(3,1)
        sender: 0
        receiver: 2
        strategy: 1 leak-shares
        after-commit: 2
        k: 2
        trials: 3
        """
    )
    transcript = run_scenario(scenario)
    # the receiver alone plus the leaked copies from player 1 recovers m
    assert not transcript.passed
    assert "after-commit coalition {2}: learns m" in transcript.notes


def test_robust_misdealer_scenario():
    transcript = run_scenario(get_scenario("robust-misdealer").with_overrides(trials=10))
    assert transcript.passed
    assert set(transcript.verdict_counts) <= {"dealer-caught(complainers {2,3})", "rejected(flip)"}


def test_honest_bb84_scenario():
    transcript = run_scenario(get_scenario("bb84-honest").with_overrides(trials=5))
    assert transcript.passed
    assert transcript.verdict_counts == {"accept": 5}
    assert transcript.aggregates["wrong_outputs"] == 0
    assert transcript.aggregates["too_few_good"] == 0


def test_too_few_good_aborts_are_counted_apart():
    scenario = load_scenario("protocol: bb84-ot\npositions: 32\nalpha: 0.5\ntrials: 3\n")
    transcript = run_scenario(scenario)
    assert transcript.aggregates["too_few_good"] == 3
    checks = {c.name: c.passed for c in transcript.checks}
    assert checks["correctness"] and checks["completeness"]
    assert not checks["acceptance"]
    assert not transcript.passed


def test_gmw_scenarios():
    transcript = run_scenario(get_scenario("gmw-majority3").with_overrides(trials=8))
    assert transcript.passed
    assert transcript.aggregates["ot_calls_per_run"] == 27


def test_attack_demo_scenario():
    transcript = run_scenario(get_scenario("attack-third-party"))
    assert transcript.passed
    assert transcript.verdict_counts == {"third party breaks both properties": 1}


def test_trial_errors_become_verdicts():
    scenario = Scenario(name="broken", protocol=ProtocolKind.GMW, circuit="missing.circuit", trials=2)
    transcript = run_scenario(scenario)
    assert not transcript.passed
    assert all(r.verdict.startswith("error: FileNotFoundError") for r in transcript.trials)


def test_parallel_trials_match_sequential():
    scenario = get_scenario("gmw-majority3").with_overrides(trials=12)
    sequential = ScenarioRunner(scenario, workers=1).run()
    parallel = ScenarioRunner(scenario, workers=4).run()
    assert [r.digest for r in sequential.trials] == [r.digest for r in parallel.trials]
    assert [r.index for r in parallel.trials] == list(range(12))


def test_text_report():
    text = render_text(run_scenario(get_scenario("attack-entangling")))
    assert text.startswith("scenario: attack-entangling\n")
    assert "  flippable: 1" in text
    assert text.endswith("result: PASS\n")


def test_structured_report_round_trip():
    transcript = run_scenario(get_scenario("vss-honest").with_overrides(trials=3))
    parsed = parse_structured(report(transcript, ReportFormat.STRUCTURED))
    assert parsed == transcript
    assert json.loads(report(transcript, "structured"))["scenario"] == "vss-honest"


def test_junit_report_marks_failures():
    scenario = Scenario(name="broken", protocol=ProtocolKind.GMW, circuit="missing.circuit", trials=1)
    xml = render_junit(run_scenario(scenario))
    assert "<testsuite" in xml
    assert "<failure" in xml
    assert 'name="trials"' in xml


@pytest.mark.slow
def test_concealing_and_binding_for_four_players():
    transcript = run_scenario(get_scenario("commit-concealing-n4").with_overrides(trials=3))
    assert transcript.passed
    assert transcript.aggregates["concealing"] == "exact"
    assert transcript.aggregates["flip_attempts"] == transcript.aggregates["flips_rejected"]


@pytest.mark.slow
def test_robust_false_complainer_stays_concealing():
    transcript = run_scenario(get_scenario("robust-false-complainer").with_overrides(trials=5))
    assert transcript.passed
    assert transcript.aggregates["concealing"] == "exact"


@pytest.mark.slow
@pytest.mark.parametrize("name", ["bb84-delayed-8", "bb84-delayed-16", "bb84-delayed-32"])
def test_delayed_measurement_detection(name):
    trials = 2000
    transcript = run_scenario(get_scenario(name).with_overrides(trials=trials))
    detected = transcript.verdict_counts.get("abort-cheat-detected", 0)
    assert binomtest(detected, trials, transcript.aggregates["expected_detection"]).pvalue > 1e-4


@pytest.mark.slow
def test_bb84_without_forcing_recovers_both():
    transcript = run_scenario(get_scenario("bb84-no-forcing").with_overrides(trials=20))
    assert transcript.passed
    assert transcript.aggregates["recovered_both_frequency"] == 1.0


def test_reports_are_reproducible():
    scenario = get_scenario("commit-flip").with_overrides(trials=3, seed=21)
    assert render_text(run_scenario(scenario)) == render_text(run_scenario(scenario))


def test_concealment_catches_reversed_orientation():
    # sender inside M committing to a receiver outside it
    scenario = Scenario(
        name="reversed", protocol=ProtocolKind.COMMIT_PARTIAL, maximal=[0], sender=0, receiver=1, k=1,
        checks=["concealing"],
    )
    with pytest.raises(SimulationError):
        validate_scenario(scenario)
    detail, exact, skipped = concealment(scenario, Variant.PARTIAL)
    assert not exact
    assert detail.endswith("differ: {1,2}")
    assert skipped == []


def test_partial_concealment_skips_nothing():
    transcript = run_scenario(get_scenario("temporary-assumption").with_overrides(trials=1))
    assert transcript.aggregates["concealing_skipped"] == []

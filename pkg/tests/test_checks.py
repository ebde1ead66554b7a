import pytest

from tempassume.checks import (
    AllTrialsPassCheck,
    Check,
    ConditionCheck,
    FrequencyCheck,
    MinimumRateCheck,
    UpperBoundCheck,
    Verdict,
)


def test_grade_records_parameters_and_label():
    result = MinimumRateCheck.grade(label="acceptance", hits=999, trials=1000, minimum=0.998)
    assert result.name == "acceptance"
    assert result.passed
    assert result.parameters == {"hits": 999, "trials": 1000, "minimum": 0.998}


def test_base_check_has_no_score():
    with pytest.raises(NotImplementedError):
        Check.grade()


def test_frequency_check_near_certainty():
    # 1 - 0.75**32: one miss in 2000 runs is expected, twenty are not
    expected = 1 - 0.75**32
    assert FrequencyCheck.grade(hits=1999, trials=2000, expected=expected).passed
    assert not FrequencyCheck.grade(hits=1980, trials=2000, expected=expected).passed


def test_upper_bound_check():
    assert UpperBoundCheck.grade(hits=52, trials=100, bound=0.5).passed
    assert not UpperBoundCheck.grade(hits=90, trials=100, bound=0.5).passed


def test_verdict_renames_repeated_checks():
    results = [
        ConditionCheck.grade(holds=True),
        ConditionCheck.grade(holds=False, detail="broken"),
        AllTrialsPassCheck.grade(passed=3, trials=3),
    ]
    verdict = Verdict.from_checks(results)
    assert set(verdict.scores) == {"condition-1", "condition-2", "trials-pass"}
    assert not verdict.passed
    assert verdict.score == pytest.approx(2 / 3)
    assert results[1].metadata == {"detail": "broken"}

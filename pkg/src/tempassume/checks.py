import logging
import math
from typing import Annotated, Any, Dict, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, field_validator
from scipy.stats import binomtest

logger = logging.getLogger(__name__)

SIGMAS = 3.0
THREE_SIGMA_PVALUE = 0.0027


def validate_check_name(name: str) -> str:
    """Validate a check name."""
    if not name:
        raise ValueError("Check name cannot be empty")
    if not name.replace("-", "_").isidentifier():
        raise ValueError("Check name must contain only letters, digits, underscores, and hyphens")
    return name


CheckName = Annotated[str, "A check name containing only letters, underscores, and hyphens"]


class CheckResult(BaseModel):
    name: CheckName
    score: float
    weight: float = 1.0
    parameters: Dict[str, Any] = Field(default_factory=dict)
    metadata: Dict[str, Any] = Field(default_factory=dict)

    @field_validator("name")
    @classmethod
    def _name(cls, v: str) -> str:
        return validate_check_name(v)

    @property
    def passed(self) -> bool:
        return self.score >= 1.0


class Verdict(BaseModel):
    """Weighted combination of check results for one scenario."""

    score: float
    passed: bool
    scores: dict[str, float]
    weights: dict[str, float]

    @staticmethod
    def from_checks(results: list[CheckResult]) -> "Verdict":
        name_counts: dict[str, int] = {}
        for r in results:
            name_counts[r.name] = name_counts.get(r.name, 0) + 1

        scores: dict[str, float] = {}
        weights: dict[str, float] = {}
        name_usage: dict[str, int] = {}
        for r in results:
            final_name = r.name
            if name_counts[r.name] > 1:
                name_usage[r.name] = name_usage.get(r.name, 0) + 1
                final_name = f"{r.name}-{name_usage[r.name]}"
            scores[final_name] = r.score
            weights[final_name] = r.weight

        total_weight = sum(weights.values())
        if total_weight > 0:
            score = sum(scores[k] * weights[k] for k in scores) / total_weight
        else:
            score = 0.0
        score = float(np.clip(score, 0.0, 1.0))
        return Verdict(score=score, passed=all(r.passed for r in results), scores=scores, weights=weights)


class Check:
    name: str = "BaseCheck"

    @classmethod
    def grade(cls, weight: float = 1.0, label: str | None = None, **kwargs) -> CheckResult:
        """Run the check; `label` names the result when one check class is used twice."""
        result = cls.compute_score(**kwargs)
        if isinstance(result, tuple):
            score, metadata = result
        else:
            score, metadata = result, {}
        return CheckResult(name=label or cls.name, score=score, weight=weight, parameters=_plain(kwargs), metadata=metadata)

    @classmethod
    def compute_score(cls, **kwargs) -> Union[float, Tuple[float, Dict[str, Any]]]:
        """
        Compute a score between 0.0 and 1.0.

        Can return either:
        - float: Just the score
        - tuple[float, dict]: Score and metadata dictionary
        """
        raise NotImplementedError("Subclasses must implement compute_score")


def _plain(kwargs: dict) -> dict:
    return {k: v for k, v in kwargs.items() if isinstance(v, (int, float, str, bool, type(None)))}


class AllTrialsPassCheck(Check):
    """Every trial met its expectation."""

    name = "trials-pass"

    @classmethod
    def compute_score(cls, passed: int, trials: int, **kwargs) -> tuple[float, dict]:
        return (1.0 if passed == trials else 0.0), {"passed": passed, "trials": trials}


class MinimumRateCheck(Check):
    name = "minimum-rate"

    @classmethod
    def compute_score(cls, hits: int, trials: int, minimum: float, **kwargs) -> tuple[float, dict]:
        rate = hits / trials
        return (1.0 if rate >= minimum else 0.0), {"rate": rate, "minimum": minimum}


class FrequencyCheck(Check):
    """Observed frequency consistent with the expected one at the three-sigma level.

    Uses the exact two-sided binomial test, which stays valid when the
    expected frequency is close to 0 or 1.
    """

    name = "frequency"

    @classmethod
    def compute_score(cls, hits: int, trials: int, expected: float, **kwargs) -> tuple[float, dict]:
        observed = hits / trials
        pvalue = float(binomtest(hits, trials, expected).pvalue)
        ok = pvalue >= THREE_SIGMA_PVALUE
        return (1.0 if ok else 0.0), {"observed": observed, "expected": expected, "pvalue": pvalue}


class UpperBoundCheck(Check):
    """Observed frequency at most the bound plus three standard errors."""

    name = "upper-bound"

    @classmethod
    def compute_score(cls, hits: int, trials: int, bound: float, **kwargs) -> tuple[float, dict]:
        observed = hits / trials
        sigma = math.sqrt(bound * (1 - bound) / trials)
        return (1.0 if observed <= bound + SIGMAS * sigma else 0.0), {"observed": observed, "bound": bound}


class ConditionCheck(Check):
    """A boolean fact established once per scenario."""

    name = "condition"

    @classmethod
    def compute_score(cls, holds: bool, **kwargs) -> tuple[float, dict]:
        detail = kwargs.get("detail")
        return (1.0 if holds else 0.0), ({"detail": detail} if detail else {})

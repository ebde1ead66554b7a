#!/usr/bin/env python3

import asyncio
import logging
import time
from collections import Counter
from typing import Any

from pydantic import BaseModel

from .checks import CheckResult, Verdict
from .errors import SimulationError
from .protocols import PROTOCOL_RUNNERS, TrialOutcome
from .scenario import Scenario, validate_scenario
from .utils import derive_seed, digest_lines

logger = logging.getLogger(__name__)


class TrialRecord(BaseModel):
    index: int
    seed: int
    verdict: str
    passed: bool
    digest: str
    metrics: dict[str, float] = {}


class Transcript(BaseModel):
    scenario: str
    protocol: str
    structure: str
    seed: int
    trials: list[TrialRecord]
    verdict_counts: dict[str, int]
    aggregates: dict[str, Any]
    checks: list[CheckResult]
    verdict: Verdict
    events: list[str]
    notes: list[str] = []

    @property
    def passed(self) -> bool:
        return self.verdict.passed and all(t.passed for t in self.trials)


class ScenarioRunner:
    """Runs every trial of a scenario and folds the outcomes into a transcript."""

    def __init__(self, scenario: Scenario, workers: int = 1):
        self.scenario = scenario
        self.workers = max(1, workers)
        self.runner = PROTOCOL_RUNNERS[scenario.protocol]

    def trial_seed(self, index: int) -> int:
        return derive_seed(self.scenario.seed, self.scenario.name, index)

    def _trial(self, index: int) -> TrialOutcome:
        seed = self.trial_seed(index)
        try:
            return self.runner.trial(self.scenario, index, seed)
        except SimulationError as e:
            logger.warning(f"Trial {index} failed: {e.message}")
            return TrialOutcome(index=index, verdict=f"error: {e.message}", passed=False)
        except Exception as e:
            logger.exception(f"Trial {index} crashed: {e}")
            return TrialOutcome(index=index, verdict=f"error: {type(e).__name__}: {e}", passed=False)

    async def _run_parallel(self) -> list[TrialOutcome]:
        semaphore = asyncio.Semaphore(self.workers)

        async def one(index: int) -> TrialOutcome:
            async with semaphore:
                return await asyncio.to_thread(self._trial, index)

        return list(await asyncio.gather(*(one(i) for i in range(self.scenario.trials))))

    def run_trials(self) -> list[TrialOutcome]:
        if self.workers == 1:
            outcomes = [self._trial(i) for i in range(self.scenario.trials)]
        else:
            outcomes = asyncio.run(self._run_parallel())
        return sorted(outcomes, key=lambda o: o.index)

    def run(self) -> Transcript:
        """Run the complete scenario."""
        start = time.time()
        logger.info("=" * 60)
        logger.info("SCENARIO STARTED")
        logger.info(f"   Name: {self.scenario.name}")
        logger.info(f"   Protocol: {self.scenario.protocol.value}, trials: {self.scenario.trials}")
        logger.info("=" * 60)

        validate_scenario(self.scenario)
        outcomes = self.run_trials()
        try:
            aggregates, checks = self.runner.summarize(self.scenario, outcomes)
        except SimulationError as e:
            logger.warning(f"Summary failed: {e.message}")
            aggregates, checks = {"error": e.message}, [CheckResult(name="summary", score=0.0)]
        verdict = Verdict.from_checks(checks)

        transcript = Transcript(
            scenario=self.scenario.name,
            protocol=self.scenario.protocol.value,
            structure=self.scenario.structure,
            seed=self.scenario.seed,
            trials=[
                TrialRecord(
                    index=o.index,
                    seed=self.trial_seed(o.index),
                    verdict=o.verdict,
                    passed=o.passed,
                    digest=digest_lines(o.events),
                    metrics=o.metrics,
                )
                for o in outcomes
            ],
            verdict_counts=dict(sorted(Counter(o.verdict for o in outcomes).items())),
            aggregates=aggregates,
            checks=checks,
            verdict=verdict,
            events=outcomes[0].events,
            notes=outcomes[0].lines,
        )

        logger.info("=" * 60)
        logger.info("SCENARIO COMPLETE")
        logger.info(f"   Passed: {transcript.passed} (score {verdict.score:.4f})")
        logger.info(f"   Duration: {time.time() - start:.2f}s")
        logger.info("=" * 60)
        return transcript


def run_scenario(scenario: Scenario, workers: int = 1) -> Transcript:
    return ScenarioRunner(scenario, workers=workers).run()

import logging
from enum import Enum

from junitparser import Failure, JUnitXml, TestCase, TestSuite

from .runner import Transcript

logger = logging.getLogger(__name__)


class ReportFormat(str, Enum):
    TEXT = "text"
    STRUCTURED = "structured"
    JUNIT = "junit"


def render_text(t: Transcript) -> str:
    assert t.trials, "a transcript always holds at least one trial"
    lines = [
        f"scenario: {t.scenario}",
        f"protocol: {t.protocol}",
        f"structure: {t.structure}",
        f"seed: {t.seed}",
        f"trials: {len(t.trials)} ({sum(r.passed for r in t.trials)} passed)",
        "verdicts:",
    ]
    lines += [f"  {verdict}: {count}" for verdict, count in t.verdict_counts.items()]
    if t.aggregates:
        lines.append("aggregates:")
        lines += [f"  {key}: {_fmt(value)}" for key, value in t.aggregates.items()]
    lines.append("checks:")
    for check in t.checks:
        status = "pass" if check.passed else "FAIL"
        extra = " ".join(f"{k}={_fmt(v)}" for k, v in check.metadata.items() if not isinstance(v, dict))
        lines.append(f"  {check.name}: {status}" + (f" ({extra})" if extra else ""))
    if t.notes:
        lines.append("details:")
        lines += [f"  {note}" for note in t.notes]
    lines.append(f"result: {'PASS' if t.passed else 'FAIL'}")
    return "\n".join(lines) + "\n"


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def render_structured(t: Transcript) -> str:
    return t.model_dump_json(indent=2) + "\n"


def parse_structured(text: str) -> Transcript:
    return Transcript.model_validate_json(text)


def render_junit(t: Transcript) -> str:
    suite = TestSuite(t.scenario)
    for check in t.checks:
        case = TestCase(check.name, classname=t.scenario)
        if not check.passed:
            case.result = [Failure(f"{check.name} failed: {check.metadata}")]
        suite.add_testcase(case)
    failed = [r for r in t.trials if not r.passed]
    case = TestCase("trials", classname=t.scenario)
    if failed:
        first = failed[0]
        case.result = [Failure(f"{len(failed)} of {len(t.trials)} trials failed; first: trial {first.index} {first.verdict}")]
    suite.add_testcase(case)
    suite.update_statistics()
    xml = JUnitXml()
    xml.add_testsuite(suite)
    raw = xml.tostring()
    return raw.decode() if isinstance(raw, bytes) else raw


RENDERERS = {
    ReportFormat.TEXT: render_text,
    ReportFormat.STRUCTURED: render_structured,
    ReportFormat.JUNIT: render_junit,
}


def report(t: Transcript, fmt: ReportFormat | str = ReportFormat.TEXT) -> str:
    return RENDERERS[ReportFormat(fmt)](t)

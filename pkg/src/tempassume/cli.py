import logging
from pathlib import Path

import click

import tempassume.scenarios
from tempassume.utils import import_submodules

from .config import load_settings
from .errors import SimulationError
from .quantum.attacks import TOY_PROTOCOLS, mayers_attack_demo, third_party_demo
from .quantum.bb84 import DEFAULT_ALPHA, DEFAULT_N, Attack
from .report import ReportFormat, report
from .runner import run_scenario
from .scenario import SCENARIO_REGISTRY, ProtocolKind, Scenario, get_scenario, load_scenario
from .structures import (
    dual_access,
    format_set,
    format_structure,
    max_unqualified,
    parse_structure,
    partially_robust_admissible,
    player_set,
    post_termination_secure,
    robust_admissible,
)

logger = logging.getLogger(__name__)

USAGE_ERROR = 2


def _usage_error(message: str) -> None:
    click.echo(f"Error: {message}", err=True)
    raise click.exceptions.Exit(USAGE_ERROR)


def _emit(transcript, fmt: str) -> None:
    click.echo(report(transcript, fmt), nl=False)
    raise click.exceptions.Exit(0 if transcript.passed else 1)


@click.group()
@click.option("--log-level", default=None, help="Logging level (default from TEMPASSUME_LOG_LEVEL).")
@click.pass_context
def main(ctx: click.Context, log_level: str | None):
    """Simulate temporary-assumption multiparty protocols."""
    settings = load_settings()
    logging.basicConfig(
        level=(log_level or settings.log_level).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    ctx.obj = settings
    import_submodules(tempassume.scenarios)


@main.command("check-structure")
@click.argument("literal")
@click.option("--maximal", default=None, help="Players of a maximal set M, e.g. '0 1'.")
def check_structure(literal: str, maximal: str | None):
    """Report cover conditions and derived structures for a structure literal."""
    try:
        a = parse_structure(literal)
        lines = [
            f"structure: {format_structure(a)}",
            f"partial: {'yes' if partially_robust_admissible(a) else 'no'}, "
            f"robust: {'yes' if robust_admissible(a) else 'no'}",
            f"access structure: {format_structure(dual_access(a))}",
            "replica tags: " + " ".join(format_set(t) for t in max_unqualified(dual_access(a))),
        ]
        if maximal is not None:
            m = player_set(int(tok) for tok in maximal.split())
            lines.append(f"after termination (M={format_set(m)}): {format_structure(post_termination_secure(a, m))}")
    except (SimulationError, ValueError) as e:
        _usage_error(getattr(e, "message", str(e)))
    click.echo("\n".join(lines))


@main.command("run")
@click.argument("source")
@click.option("--seed", type=int, default=None, help="Master seed (overrides the scenario).")
@click.option("--trials", type=int, default=None, help="Trial count (overrides the scenario).")
@click.option("--report", "fmt", type=click.Choice([f.value for f in ReportFormat]), default="text")
@click.option("--workers", type=int, default=None, help="Parallel trial threads.")
@click.pass_obj
def run(settings, source: str, seed: int | None, trials: int | None, fmt: str, workers: int | None):
    """Run a scenario file, or a built-in scenario given as @name."""
    try:
        if source.startswith("@"):
            scenario = get_scenario(source[1:])
        else:
            path = Path(source)
            if not path.exists():
                _usage_error(f"no such scenario file: {source}")
            scenario = load_scenario(path.read_text())
        if trials is not None and trials < 1:
            _usage_error("--trials must be at least 1")
        scenario = scenario.with_overrides(seed=seed, trials=trials)
        transcript = run_scenario(scenario, workers=workers or settings.workers)
    except SimulationError as e:
        _usage_error(e.message)
    _emit(transcript, fmt)


@main.command("attack-demo")
@click.argument("protocol", type=click.Choice([*TOY_PROTOCOLS, "third-party"]))
def attack_demo(protocol: str):
    """Certify a toy quantum commitment as distinguishable or flippable."""
    try:
        report_ = third_party_demo() if protocol == "third-party" else mayers_attack_demo(protocol)
    except SimulationError as e:
        click.echo(f"inconclusive: {e.message}")
        raise click.exceptions.Exit(1)
    click.echo("\n".join(report_.lines()))


@main.command("bb84-ot")
@click.option("--n", "positions", type=int, default=DEFAULT_N, help="Number of BB84 positions.")
@click.option("--alpha", type=float, default=DEFAULT_ALPHA, help="Fraction of positions tested.")
@click.option("--attack", type=click.Choice([a.value for a in Attack]), default=Attack.NONE.value)
@click.option("--forcing/--no-forcing", default=True, help="Commit to measurements before the test.")
@click.option("--trials", type=int, default=1)
@click.option("--seed", type=int, default=None)
@click.option("--report", "fmt", type=click.Choice([f.value for f in ReportFormat]), default="text")
@click.option("--workers", type=int, default=None)
@click.pass_obj
def bb84_ot(settings, positions: int, alpha: float, attack: str, forcing: bool, trials: int, seed, fmt: str, workers):
    """Run BB84 oblivious transfer trials."""
    try:
        scenario = Scenario(
            name="bb84-ot",
            protocol=ProtocolKind.BB84_OT,
            positions=positions,
            alpha=alpha,
            attack=attack,
            forcing=forcing,
            trials=trials,
            seed=settings.seed if seed is None else seed,
        )
        if positions < 32 or not 0 < alpha < 1:
            _usage_error("need --n >= 32 and 0 < --alpha < 1")
        transcript = run_scenario(scenario, workers=workers or settings.workers)
    except (SimulationError, ValueError) as e:
        _usage_error(getattr(e, "message", str(e)))
    _emit(transcript, fmt)


@main.command("list-scenarios")
def list_scenarios():
    """List the built-in scenarios."""
    for spec in SCENARIO_REGISTRY:
        click.echo(f"{spec.name:28} {spec.description}")


if __name__ == "__main__":
    main()

import json

from click.testing import CliRunner

from tempassume.cli import main


def invoke(*args):
    return CliRunner().invoke(main, list(args))


def test_check_structure():
    result = invoke("check-structure", "threshold(4,1)", "--maximal", "3")
    assert result.exit_code == 0
    assert "partial: yes, robust: yes" in result.output
    assert "after termination (M={3})" in result.output


def test_check_structure_parse_error():
    result = invoke("check-structure", "threshold(4")
    assert result.exit_code == 2


def test_run_builtin():
    result = invoke("run", "@structure-two-pairs")
    assert result.exit_code == 0
    assert "partial: no, robust: no: 1" in result.output
    assert result.output.endswith("result: PASS\n")


def test_run_file_with_structured_report(tmp_path):
    path = tmp_path / "vss.scenario"
    path.write_text("name: vss-file\nprotocol: vss\nk: 4\ntrials: 3\n")
    result = invoke("run", str(path), "--report", "structured", "--seed", "11")
    assert result.exit_code == 0
    transcript = json.loads(result.output)
    assert transcript["seed"] == 11
    assert len(transcript["trials"]) == 3


def test_run_trial_override_and_junit():
    result = invoke("run", "@gmw-majority3", "--trials", "2", "--report", "junit", "--workers", "2")
    assert result.exit_code == 0
    assert "<testsuite" in result.output


def test_run_failing_scenario_exits_one(tmp_path):
    path = tmp_path / "broken.scenario"
    path.write_text("protocol: gmw\ncircuit: missing.circuit\n")
    result = invoke("run", str(path))
    assert result.exit_code == 1
    assert "result: FAIL" in result.output


def test_run_usage_errors(tmp_path):
    assert invoke("run", str(tmp_path / "absent.scenario")).exit_code == 2
    assert invoke("run", "@no-such-scenario").exit_code == 2
    assert invoke("run", "@vss-honest", "--trials", "0").exit_code == 2

    bad = tmp_path / "bad.scenario"
    bad.write_text("protocol: commit-partial\nstructure: threshold(4,2)\n")
    assert invoke("run", str(bad)).exit_code == 2


def test_attack_demo():
    result = invoke("attack-demo", "revealing")
    assert result.exit_code == 0
    assert "certified: distinguishable" in result.output

    result = invoke("attack-demo", "third-party")
    assert result.exit_code == 0
    assert "third party joins Alice:" in result.output


def test_bb84_ot():
    result = invoke("bb84-ot", "--trials", "2", "--seed", "4")
    assert result.exit_code == 0
    assert "accept: 2" in result.output


def test_bb84_ot_without_forcing():
    result = invoke("bb84-ot", "--attack", "delayed", "--no-forcing", "--trials", "2")
    assert result.exit_code == 0
    assert "recovered_both_frequency: 1" in result.output


def test_bb84_ot_bounds():
    assert invoke("bb84-ot", "--n", "16").exit_code == 2
    assert invoke("bb84-ot", "--alpha", "1.5").exit_code == 2


def test_list_scenarios():
    result = invoke("list-scenarios")
    assert result.exit_code == 0
    assert "temporary-assumption" in result.output
    assert "bb84-delayed-16" in result.output

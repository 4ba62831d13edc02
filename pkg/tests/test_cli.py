import json

import pytest

from app.cli import build_parser, main, select_commands
from app.services.spec_format import parse_spec_file
from tests.conftest import fixture_path


# 1. exit codes
def test_finite_run_exits_zero(capsys):
    assert main(["run", fixture_path("finite.precu")]) == 0
    out = capsys.readouterr().out
    assert "completion of T3" in out


def test_broken_file_is_a_configuration_error(capsys):
    assert main(["run", fixture_path("broken.precu")]) == 2
    err = capsys.readouterr().err
    assert "ValidationError" in err
    assert "not associative" in err


def test_missing_file(capsys):
    assert main(["run", fixture_path("nowhere.precu")]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_non_positive_budget():
    assert main(["run", fixture_path("finite.precu"), "--budget", "0"]) == 2


def test_unknown_command_is_rejected_by_the_parser():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["prove", "x.precu"])


# 2. command selection
def test_selects_matching_run_lines():
    doc = parse_spec_file(fixture_path("finite.precu"))
    assert [c.text for c in select_commands(doc, "check")] == ["check T3 expect=pass", "check trunc expect=pass"]
    assert len(select_commands(doc, "run")) == 4


def test_falls_back_to_declared_targets():
    doc = parse_spec_file(fixture_path("catalog.precu"))
    assert [c.target for c in select_commands(doc, "check")] == ["Q", "N", "Ninf", "T3"]
    assert select_commands(doc, "model") == []
    assert [c.target for c in select_commands(doc, "counterexample")] == [None]


# 3. JSON output
def test_json_report_to_file(tmp_path):
    out = tmp_path / "report.json"
    code = main(["check", fixture_path("finite.precu"), "--json", str(out)])
    assert code == 0
    tree = json.loads(out.read_text(encoding="utf-8"))
    assert tree["exit_code"] == 0
    assert [r["command"] for r in tree["results"]] == ["check T3 expect=pass", "check trunc expect=pass"]


def test_json_report_to_stdout(capsys):
    code = main(["check", fixture_path("finite.precu"), "--json", "-", "--parallel"])
    assert code == 0
    tree = json.loads(capsys.readouterr().out)
    assert tree["document"]["source"].endswith("finite.precu")

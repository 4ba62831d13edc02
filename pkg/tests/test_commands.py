import json

import pytest

from app.services.commands import (
    EXIT_CONFIG,
    EXIT_FAILED,
    EXIT_OK,
    EXIT_UNKNOWN,
    CommandReport,
    exit_code,
    run_command,
    run_commands,
    to_json,
)
from app.services.errors import UnknownCommand
from app.services.spec_format import RunCommand, parse_spec, parse_spec_file
from tests.conftest import fixture_path


def report(verdict, expect=None, error=None):
    return CommandReport(RunCommand("classify", "Q", expect=expect), verdict, error=error)


# 1. exit codes
@pytest.mark.parametrize(
    "verdict, expect, code",
    [
        ("pass", None, EXIT_OK),
        ("evidence-pass", "pass", EXIT_OK),
        ("disproof", None, EXIT_FAILED),
        ("disproof", "fail", EXIT_OK),
        ("disproof", "disproof", EXIT_OK),
        ("disproof", "pass", EXIT_FAILED),
        ("unknown", "pass", EXIT_UNKNOWN),
        ("unknown", None, EXIT_OK),
        ("pass", "evidence-pass", EXIT_FAILED),
    ],
)
def test_command_exit_code(verdict, expect, code):
    assert report(verdict, expect).exit_code == code


def test_errors_are_configuration_failures():
    r = report("error", "pass", error={"code": "ValidationError"})
    assert r.exit_code == EXIT_CONFIG
    assert r.to_dict()["error"] == {"code": "ValidationError"}


def test_exit_code_precedence():
    unknown, failed, error = report("unknown", "pass"), report("disproof"), report("error", error={})
    assert exit_code([]) == EXIT_OK
    assert exit_code([report("pass"), unknown]) == EXIT_UNKNOWN
    assert exit_code([unknown, failed]) == EXIT_FAILED
    assert exit_code([failed, error, unknown]) == EXIT_CONFIG


# 2. running documents
def test_finite_fixture_passes():
    doc = parse_spec_file(fixture_path("finite.precu"))
    results = run_commands(doc)
    assert all(r.verdict in ("pass", "evidence-pass") for r in results)
    assert exit_code(results) == EXIT_OK
    assert "table" in results[0].report
    assert results[0].report["budget"] == 64


def test_command_budget_wins():
    doc = parse_spec("[monoid N]\nfamily: N\n[run]\ncheck N budget=8\n")
    result = run_command(doc, doc.commands[0], 32)
    assert result.report["budget"] == 8


def test_completing_a_catalog_map_is_an_error():
    doc = parse_spec("[map i]\ncatalog: iota_N\n\n[run]\ncomplete i expect=pass\n")
    result = run_command(doc, doc.commands[0])
    assert result.verdict == "error"
    assert result.error["code"] == "ValidationError"
    assert result.exit_code == EXIT_CONFIG
    assert result.text.startswith("complete i expect=pass: ValidationError")


def test_unknown_command():
    doc = parse_spec_file(fixture_path("finite.precu"))
    with pytest.raises(UnknownCommand):
        run_command(doc, RunCommand("prove", "T3"))


def test_classify_records_the_claimed_class():
    doc = parse_spec("[monoid Q]\nfamily: Q+\n[run]\nclassify Q expect=pass\n")
    result = run_command(doc, doc.commands[0], 32)
    assert result.report["claimed"] == "PreCu"
    assert result.exit_code == EXIT_OK
    assert result.text.startswith("Q+: ")


def test_catalog_fixture():
    results = run_commands(parse_spec_file(fixture_path("catalog.precu")))
    assert exit_code(results) == EXIT_OK
    complete_q = results[3]
    assert complete_q.command.text == "complete Q"
    checks = complete_q.report["checks"]
    assert checks[-1]["property"] == "hereditary iff in C"
    assert checks[-1]["status"] == "pass"


@pytest.mark.parametrize("name", ["systems.precu", "models.precu", "dyadic.precu"])
def test_fixture_runs_succeed(name):
    results = run_commands(parse_spec_file(fixture_path(name)), parallel=True)
    assert exit_code(results) == EXIT_OK, [r.to_dict() for r in results if r.exit_code]


# 3. serialization
def test_json_report_is_deterministic():
    doc = parse_spec_file(fixture_path("finite.precu"))
    sequential = to_json(run_commands(doc), doc)
    parallel = to_json(run_commands(doc, parallel=True), doc)
    assert sequential == parallel
    tree = json.loads(sequential)
    assert tree["exit_code"] == EXIT_OK
    assert tree["document"]["monoids"] == ["C2", "T3"]
    assert [r["command"] for r in tree["results"]] == [c.text for c in doc.commands]


@pytest.mark.parametrize("name", ["finite.precu", "catalog.precu", "systems.precu"])
def test_embedded_commands_reproduce_the_report(name):
    with open(fixture_path(name), encoding="utf-8") as fh:
        text = fh.read()
    doc = parse_spec(text, source=name)
    first = to_json(run_commands(doc), doc)

    declarations = text.split("[run]", 1)[0]
    commands = [r["command"] for r in json.loads(first)["results"]]
    rerun = parse_spec(declarations + "[run]\n" + "\n".join(commands) + "\n", source=name)
    assert to_json(run_commands(rerun), rerun) == first

import pytest

from app.services.errors import ParseError, ValidationError
from app.services.finite_lab import FiniteMonoid
from app.services.spec_format import COMMANDS, parse_command, parse_spec, parse_spec_file
from tests.conftest import fixture_path

T2_TABLE = """
[monoid T2]
names: a0 a1 a2
add:
  0 1 2
  1 1 2
  2 2 2
order: a0<a1 a1<a2
"""


# 1. documents
def test_finite_fixture():
    doc = parse_spec_file(fixture_path("finite.precu"))
    assert sorted(doc.monoids) == ["C2", "T3"]
    assert isinstance(doc.monoid("T3"), FiniteMonoid)
    assert [c.text for c in doc.commands] == [
        "check T3 expect=pass",
        "complete T3 expect=pass",
        "check trunc expect=pass",
        "complete trunc expect=pass",
    ]
    assert doc.maps["trunc"].name == "trunc"


def test_order_pairs_are_closed_transitively():
    doc = parse_spec(T2_TABLE)
    T2 = doc.monoid("T2")
    assert T2.leq(T2.element("a0"), T2.element("a2"))
    assert not T2.leq(T2.element("a2"), T2.element("a0"))


def test_comments_and_catalog_families():
    doc = parse_spec("# families only\n[monoid Q]  # the rationals\nfamily: Q+\n")
    assert doc.monoid("Q").family_id == "Q+"
    assert doc.monoid("N_inf").family_id == "N_inf"


def test_to_dict():
    doc = parse_spec_file(fixture_path("dyadic.precu"))
    d = doc.to_dict()
    assert list(d) == ["source", "monoids", "maps", "systems", "models", "commands"]
    assert d["systems"] == {"D": 3}
    assert d["commands"][-1] == "counterexample budget=64 expect=pass"


def test_all_fixtures_but_broken_parse():
    for name in ("catalog.precu", "dyadic.precu", "finite.precu", "models.precu", "systems.precu"):
        assert parse_spec_file(fixture_path(name)).commands


def test_models_fixture():
    doc = parse_spec_file(fixture_path("models.precu"))
    assert sorted(doc.models) == ["D2", "U2"]
    assert doc.models["D2"].k == 2


# 2. parse errors carry a position
def test_empty_document():
    with pytest.raises(ParseError) as exc:
        parse_spec("# nothing here\n")
    assert (exc.value.line, exc.value.col) == (1, 1)


@pytest.mark.parametrize(
    "text, line",
    [
        ("[widget W]\nsize: 1\n", 1),
        ("[monoid]\nfamily: N\n", 1),
        ("family: N\n", 1),
        ("[monoid Q]\nfamily: Q+\n\n[monoid Q]\nfamily: N\n", 4),
        ("[monoid Q]\nfamily: Q+\nfamily: N\n", 3),
        ("[monoid Z]\nfamily: Z\n", 2),
        ("[monoid T]\nadd:\n  0 1\n  1 1\norder: 0-1\n", 5),
        ("[model M]\nk: two\nV: N\nrho: 1 1\n", 2),
        ("[model M]\nk: 2\nV: N\nrho: 1 x\n", 4),
    ],
    ids=["unknown kind", "missing name", "outside section", "declared twice", "duplicate key",
         "unknown family", "bad order pair", "non-integer k", "bad rho"],
)
def test_parse_errors(text, line):
    with pytest.raises(ParseError) as exc:
        parse_spec(text)
    assert exc.value.line == line


def test_unknown_section_kind_points_at_the_kind():
    with pytest.raises(ParseError) as exc:
        parse_spec("[widget W]\n")
    assert exc.value.col == 2
    assert "widget" in exc.value.detail


# 3. run commands
def test_command_text_is_canonical():
    command = parse_command("classify Q expect=disproof budget=8", 3)
    assert (command.name, command.target, command.expect, command.budget) == ("classify", "Q", "disproof", 8)
    assert command.text == "classify Q budget=8 expect=disproof"
    assert parse_command(command.text).text == command.text


def test_counterexample_needs_no_target():
    assert parse_command("counterexample").target is None
    assert "counterexample" in COMMANDS


@pytest.mark.parametrize(
    "body",
    ["prove Q", "classify", "classify Q expect=maybe", "classify Q budget=0", "classify Q budget=x",
     "classify Q colour=red", "classify Q N"],
    ids=["unknown command", "missing target", "bad expect", "zero budget", "non-integer budget",
         "unknown option", "two targets"],
)
def test_bad_commands(body):
    with pytest.raises(ParseError):
        parse_command(body, 7)


# 4. validation
def test_broken_fixture_is_not_associative():
    with pytest.raises(ValidationError) as exc:
        parse_spec_file(fixture_path("broken.precu"))
    assert exc.value.obj == "B"
    assert exc.value.reason == "not associative at (a1, a1, a2)"


@pytest.mark.parametrize(
    "run",
    ["limit D", "commute D", "model M", "classify Nowhere"],
    ids=["limit", "commute", "model", "classify"],
)
def test_commands_need_declared_targets(run):
    with pytest.raises(ValidationError) as exc:
        parse_spec(f"[run]\n{run}\n")
    assert exc.value.line == 2


def test_table_map_image_count():
    text = T2_TABLE + "\n[map m]\nfrom: T2\nto: T2\nimages: 0 1\n"
    with pytest.raises(ValidationError) as exc:
        parse_spec(text)
    assert exc.value.obj == "m"


def test_system_with_mismatched_maps():
    with pytest.raises(ValidationError) as exc:
        parse_spec("[system X]\nstages: N\nmaps: iota_N\n")
    assert exc.value.obj == "X"


def test_model_with_flat_state():
    with pytest.raises(ValidationError):
        parse_spec("[model F]\nk: 2\nV: N\nrho: 1 0\n")

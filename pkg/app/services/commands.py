"""
Dispatch of [run] commands to the service modules.

Every command yields a `CommandReport`: the verdict word of the underlying
evidence report, the expectation from the spec file, the exit code and a
JSON-friendly report tree.
"""
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

from app.services.core_order import (
    EvidenceReport,
    MonoidClass,
    MonoidHandle,
    Status,
    check_c_membership,
    check_order_axioms,
    check_precu_membership,
    classify,
    is_hereditary,
    is_order_embedding,
    is_precu_morphism,
    resolve_budget,
)
from app.services.completion import completion_of, iota_map
from app.services.cstar_models import model_report
from app.services.errors import PrecuError, UnknownCommand, ValidationError
from app.services.finite_lab import (
    FiniteMonoid,
    brute_force_universal,
    build_completion_bruteforce,
    verify_completion_def,
    verify_cu_object,
)
from app.services.indlimits import check_limit_completion_commutes, counterexample_suite, limit_report
from app.services.spec_format import RunCommand, SpecDocument

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_UNKNOWN = 3


@dataclass
class CommandReport:
    command: RunCommand
    verdict: str
    report: dict = field(default_factory=dict)
    text: str = ""
    error: Optional[dict] = None

    @property
    def exit_code(self) -> int:
        if self.error is not None:
            return EXIT_CONFIG
        expect = self.command.expect
        if expect is None:
            return EXIT_FAILED if self.verdict == "disproof" else EXIT_OK
        if _matches(expect, self.verdict):
            return EXIT_OK
        return EXIT_UNKNOWN if self.verdict == "unknown" else EXIT_FAILED

    def to_dict(self) -> dict:
        out = {
            "command": self.command.text,
            "verdict": self.verdict,
            "expected": self.command.expect,
            "exit_code": self.exit_code,
            "report": self.report,
        }
        if self.error is not None:
            out["error"] = self.error
        return out


def _matches(expect: str, verdict: str) -> bool:
    if expect == "pass":
        return verdict in ("pass", "evidence-pass")
    if expect == "fail":
        return verdict == "disproof"
    return expect == verdict


def _text(report: EvidenceReport) -> str:
    lines = [f"{report.subject}: {report.summary_word()}"]
    for check in report.checks:
        line = f"  [{check.status.value}] {check.property}"
        if check.witness is not None and check.status != Status.PASS:
            line += f"  witness: {check.witness}"
        lines.append(line)
    lines += [f"  note: {note}" for note in report.notes]
    return "\n".join(lines)


def _merge(subject: str, *reports: EvidenceReport, exhaustive: Optional[bool] = None) -> EvidenceReport:
    merged = EvidenceReport(subject=subject)
    merged.exhaustive = all(r.exhaustive for r in reports) if exhaustive is None else exhaustive
    for r in reports:
        merged.checks.extend(r.checks)
        merged.notes.extend(r.notes)
        merged.budget_spent += r.budget_spent
    return merged


def _from_report(command: RunCommand, report: EvidenceReport, extra: Optional[dict] = None) -> CommandReport:
    tree = report.to_dict()
    if extra:
        tree.update(extra)
    return CommandReport(command, report.summary_word(), tree, _text(report))


# ==========================================
# Commands
# ==========================================

def _check(doc: SpecDocument, command: RunCommand, budget: int) -> CommandReport:
    if command.target in doc.maps:
        f = doc.maps[command.target]
        morphism = is_precu_morphism(f, f.dom, f.cod, budget=budget)
        embedding = is_order_embedding(f, f.dom, f.cod, budget=budget)
        report = _merge(f"map {f.name}", morphism)
        report.notes.append(f"order-embedding: {embedding.summary_word()}")
        return _from_report(command, report)
    M = doc.monoid(command.target)
    if isinstance(M, FiniteMonoid):
        return _from_report(command, verify_cu_object(M), {"table": M.to_dict()})
    sample = M.sample(min(budget, 10))
    report = _merge(f"axioms of {M.family_id}", check_order_axioms(M, sample),
                    check_precu_membership(M, sample, budget), exhaustive=M.is_finite)
    return _from_report(command, report)


def _claimed(handle: MonoidHandle, result) -> EvidenceReport:
    if handle.claimed_class == MonoidClass.PRECU:
        return result.precu
    if handle.claimed_class == MonoidClass.C:
        return _merge(result.c.subject, result.precu, result.c)
    return _merge(result.cu.subject, result.precu, result.c, result.cu)


def _classify(doc: SpecDocument, command: RunCommand, budget: int) -> CommandReport:
    M = doc.monoid(command.target)
    result = classify(M, budget)
    claimed = _claimed(M, result)
    tree = result.to_dict()
    tree["claimed"] = M.claimed_class.value
    text = f"{M.family_id}: {result.summary()}"
    return CommandReport(command, claimed.summary_word(), tree, text)


def _complete(doc: SpecDocument, command: RunCommand, budget: int) -> CommandReport:
    if command.target in doc.maps:
        f = doc.maps[command.target]
        if not (isinstance(f.dom, FiniteMonoid) and isinstance(f.cod, FiniteMonoid)):
            raise ValidationError(f.name, "'complete' on a map needs finite tables on both sides")
        return _from_report(command, brute_force_universal(f.dom, f.cod, f))

    M = doc.monoid(command.target)
    if isinstance(M, FiniteMonoid):
        done = build_completion_bruteforce(M)
        definition = verify_completion_def(M, done)
        report = _merge(f"completion of {M.family_id}", done.isomorphism, definition, exhaustive=True)
        return _from_report(command, report, {"completion": done.to_dict()})

    # catalog families: iota and the hereditary criterion
    bar = completion_of(M)
    iota = iota_map(M)
    sample = M.sample(min(budget, 10))
    morphism = is_precu_morphism(iota, M, bar, sample, budget)
    embedding = is_order_embedding(iota, M, bar, sample, budget)
    hereditary = is_hereditary(iota, M, bar, bar.sample(min(budget, 10)), budget, sample)
    membership = check_c_membership(M, M.probe_chains(), budget)
    report = _merge(f"completion of {M.family_id}", morphism, embedding)
    agree = hereditary.status == membership.status
    report.add("hereditary iff in C", Status.PASS if agree else Status.FAIL,
               None if agree else {"hereditary": hereditary.status.value, "C": membership.status.value})
    report.notes.append(f"iota hereditary: {hereditary.summary_word()}; C membership: {membership.summary_word()}")
    return _from_report(command, report, {"hereditary": hereditary.to_dict(), "c": membership.to_dict()})


def _limit(doc: SpecDocument, command: RunCommand, budget: int) -> CommandReport:
    decl = doc.systems[command.target]
    return _from_report(command, limit_report(decl.system, budget))


def _commute(doc: SpecDocument, command: RunCommand, budget: int) -> CommandReport:
    decl = doc.systems[command.target]
    return _from_report(command, check_limit_completion_commutes(decl.system, budget, decl.seeds))


def _counterexample(doc: SpecDocument, command: RunCommand, budget: int) -> CommandReport:
    return _from_report(command, counterexample_suite(budget))


def _model(doc: SpecDocument, command: RunCommand, budget: int) -> CommandReport:
    return _from_report(command, model_report(doc.models[command.target], budget))


_DISPATCH = {
    "check": _check,
    "classify": _classify,
    "complete": _complete,
    "limit": _limit,
    "commute": _commute,
    "counterexample": _counterexample,
    "model": _model,
}


def run_command(doc: SpecDocument, command: RunCommand, budget: Optional[int] = None) -> CommandReport:
    """Run one command; domain errors become an error entry with exit code 2."""
    handler = _DISPATCH.get(command.name)
    if handler is None:
        raise UnknownCommand(f"unknown command '{command.name}'")
    budget = resolve_budget(command.budget or budget)
    logger.debug("running %s at budget %d", command.text, budget)
    try:
        result = handler(doc, command, budget)
    except UnknownCommand:
        raise
    except PrecuError as e:
        logger.warning("%s: %s", command.text, e.message)
        return CommandReport(command, "error", {}, f"{command.text}: {e.code}: {e.message}", e.to_dict())
    result.report["budget"] = budget
    logger.info("%s -> %s", command.text, result.verdict)
    return result


def run_commands(doc: SpecDocument, budget: Optional[int] = None, parallel: bool = False,
                 commands: Optional[List[RunCommand]] = None) -> List[CommandReport]:
    """Run the [run] block; results keep the order of the block."""
    commands = doc.commands if commands is None else commands
    if not parallel or len(commands) < 2:
        return [run_command(doc, c, budget) for c in commands]
    with ThreadPoolExecutor() as pool:
        return list(pool.map(lambda c: run_command(doc, c, budget), commands))


def exit_code(results: List[CommandReport]) -> int:
    codes = {r.exit_code for r in results}
    for code in (EXIT_CONFIG, EXIT_FAILED, EXIT_UNKNOWN):
        if code in codes:
            return code
    return EXIT_OK


def to_json(results: List[CommandReport], doc: Optional[SpecDocument] = None) -> str:
    """Deterministic serialization: sorted keys, fixed separators."""
    tree = {
        "results": [r.to_dict() for r in results],
        "exit_code": exit_code(results),
    }
    if doc is not None:
        tree["document"] = doc.to_dict()
    return json.dumps(tree, sort_keys=True, indent=2, default=str, ensure_ascii=False)

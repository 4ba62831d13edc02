"""
precu: run checks and constructions described in a monoid-spec file.

    precu run fixtures/dyadic.precu
    precu classify fixtures/catalog.precu --budget 32 --json out.json
    precu counterexample fixtures/dyadic.precu --parallel -v

`run` executes the whole [run] block. Any other command executes the [run]
lines with that name; when the block has none, the command is applied to
every declared target of the matching kind.
"""
import argparse
import logging
import sys
from typing import List, Optional

from app.services.commands import EXIT_CONFIG, exit_code, run_commands, to_json
from app.services.errors import PrecuError
from app.services.spec_format import COMMANDS, RunCommand, SpecDocument, parse_spec_file

logger = logging.getLogger("precu")


def _targets(doc: SpecDocument, name: str) -> List[Optional[str]]:
    if name in ("check", "classify", "complete"):
        return list(doc.monoids) + (list(doc.maps) if name != "classify" else [])
    if name in ("limit", "commute"):
        return list(doc.systems)
    if name == "model":
        return list(doc.models)
    return [None]


def select_commands(doc: SpecDocument, name: str) -> List[RunCommand]:
    if name == "run":
        return list(doc.commands)
    chosen = [c for c in doc.commands if c.name == name]
    if chosen:
        return chosen
    return [RunCommand(name=name, target=t) for t in _targets(doc, name)]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="precu", description="Exact checks for PreCu, C and Cu ordered monoids")
    parser.add_argument("command", choices=["run"] + list(COMMANDS))
    parser.add_argument("file", help="monoid-spec file")
    parser.add_argument("--budget", type=int, default=None, help="exploration budget (default from PRECU_BUDGET)")
    parser.add_argument("--json", dest="json_out", default=None, help="write the structured report here ('-' for stdout)")
    parser.add_argument("--parallel", action="store_true", help="run independent commands concurrently")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.budget is not None and args.budget <= 0:
        print("error: --budget must be positive", file=sys.stderr)
        return EXIT_CONFIG

    try:
        doc = parse_spec_file(args.file)
        commands = select_commands(doc, args.command)
        results = run_commands(doc, args.budget, args.parallel, commands)
    except PrecuError as e:
        print(f"{args.file}: {e.code}: {e.message}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    if args.json_out != "-":
        for r in results:
            print(r.text)
    if args.json_out:
        payload = to_json(results, doc)
        if args.json_out == "-":
            print(payload)
        else:
            with open(args.json_out, "w", encoding="utf-8") as fh:
                fh.write(payload + "\n")
            logger.info("report written to %s", args.json_out)

    code = exit_code(results)
    logger.debug("exit code %d", code)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""
Line-oriented spec files.

    # comment
    [monoid T3]
    names: a0 a1 a2 a3
    add:
      0 1 2 3
      1 1 2 3
      2 2 2 3
      3 3 3 3
    order: a0<a1 a1<a2 a2<a3

    [monoid Q]
    family: Q+

    [map trunc]
    from: T3
    to: T2
    images: 0 1 2 2

    [system D]
    catalog: dyadic
    seeds: 3

    [model D2]
    k: 2
    V: N^2
    rho: 1 1/2; 1/2 1

    [run]
    classify Q expect=disproof
    counterexample budget=64 expect=evidence-pass

Order pairs are closed transitively; reflexive pairs are implied.
"""
import logging
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from app.services.catalog import catalog_map, family_handle
from app.services.core_order import MapDescriptor, MonoidHandle
from app.services.cstar_models import SimplexModel
from app.services.errors import ParseError, PrecuError, ValidationError
from app.services.finite_lab import FiniteMonoid, table_map
from app.services.indlimits import InductiveSystem, catalog_system, system_from_lists

logger = logging.getLogger(__name__)

SECTION_KINDS = ("monoid", "map", "system", "model", "run")
COMMANDS = ("check", "classify", "complete", "limit", "commute", "counterexample", "model")
EXPECTATIONS = ("pass", "evidence-pass", "disproof", "unknown", "fail")

_HEADER = re.compile(r"\[\s*(\w+)(?:\s+([^\]\s]+))?\s*\]")
_KEY = re.compile(r"([A-Za-z_]\w*)\s*:(.*)")
_ORDER_PAIR = re.compile(r"([^<\s]+)\s*<=?\s*([^<\s]+)")


@dataclass
class SystemDecl:
    system: InductiveSystem
    seeds: int = 3


@dataclass
class RunCommand:
    name: str
    target: Optional[str] = None
    expect: Optional[str] = None
    budget: Optional[int] = None
    line: int = 0

    @property
    def text(self) -> str:
        """Canonical form; parsing it again gives the same command."""
        parts = [self.name] + ([self.target] if self.target else [])
        if self.budget is not None:
            parts.append(f"budget={self.budget}")
        if self.expect is not None:
            parts.append(f"expect={self.expect}")
        return " ".join(parts)


@dataclass
class SpecDocument:
    monoids: Dict[str, MonoidHandle] = field(default_factory=dict)
    maps: Dict[str, MapDescriptor] = field(default_factory=dict)
    systems: Dict[str, SystemDecl] = field(default_factory=dict)
    models: Dict[str, SimplexModel] = field(default_factory=dict)
    commands: List[RunCommand] = field(default_factory=list)
    source: str = "<string>"

    def monoid(self, name: str) -> MonoidHandle:
        """Declared monoid, or a catalog family by name."""
        if name in self.monoids:
            return self.monoids[name]
        return family_handle(name)

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "monoids": sorted(self.monoids),
            "maps": sorted(self.maps),
            "systems": {name: decl.seeds for name, decl in sorted(self.systems.items())},
            "models": sorted(self.models),
            "commands": [c.text for c in self.commands],
        }


@dataclass
class _Section:
    kind: str
    name: Optional[str]
    line: int
    entries: Dict[str, Tuple[int, str]] = field(default_factory=dict)
    rows: List[Tuple[int, str]] = field(default_factory=list)


# ==========================================
# Lexing into sections
# ==========================================

def _strip(raw: str) -> str:
    return raw.split("#", 1)[0].rstrip()


def _sections(text: str) -> List[_Section]:
    sections: List[_Section] = []
    current: Optional[_Section] = None
    open_key: Optional[str] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        body = line.strip()

        # 1. section header
        if body.startswith("["):
            m = _HEADER.fullmatch(body)
            if not m:
                raise ParseError(lineno, col, f"malformed section header '{body}'")
            kind, name = m.group(1), m.group(2)
            if kind not in SECTION_KINDS:
                raise ParseError(lineno, col + 1, f"unknown section kind '{kind}'")
            if kind != "run" and not name:
                raise ParseError(lineno, col, f"[{kind}] needs a name")
            current, open_key = _Section(kind, name, lineno), None
            sections.append(current)
            continue
        if current is None:
            raise ParseError(lineno, col, "declaration outside of a section")

        # 2. run lines are commands
        if current.kind == "run":
            current.rows.append((lineno, body))
            continue

        # 3. key: value, or a continuation row of the last key
        m = _KEY.fullmatch(body)
        if m:
            key, value = m.group(1), m.group(2).strip()
            if key in current.entries:
                raise ParseError(lineno, col, f"duplicate key '{key}'")
            current.entries[key] = (lineno, value)
            open_key = key
            continue
        if open_key is None:
            raise ParseError(lineno, col, f"expected 'key: value', got '{body}'")
        k_line, value = current.entries[open_key]
        current.entries[open_key] = (k_line, f"{value}; {body}" if value else body)
    return sections


def _require(section: _Section, key: str) -> Tuple[int, str]:
    if key not in section.entries:
        raise ParseError(section.line, 1, f"[{section.kind} {section.name}] is missing '{key}'")
    return section.entries[key]


def _int(value: str, line: int, what: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ParseError(line, 1, f"{what} must be an integer, got '{value}'")


def _rows(value: str, line: int) -> List[List[str]]:
    return [row.split() for row in value.split(";") if row.strip()]


# ==========================================
# Declarations
# ==========================================

def _finite_monoid(section: _Section) -> FiniteMonoid:
    name = section.name
    add_line, add_text = _require(section, "add")
    table_rows = _rows(add_text, add_line)
    size = len(table_rows)
    if "size" in section.entries:
        s_line, s_text = section.entries["size"]
        if _int(s_text, s_line, "size") != size:
            raise ValidationError(name, f"size {s_text} but {size} add rows", s_line)
    names = section.entries["names"][1].split() if "names" in section.entries else [str(i) for i in range(size)]
    if len(names) != size:
        raise ValidationError(name, f"{len(names)} names for {size} elements", section.entries["names"][0])

    def index(token: str, line: int) -> int:
        if token in names:
            return names.index(token)
        if token.isdigit() and int(token) < size:
            return int(token)
        raise ParseError(line, 1, f"'{token}' is not an element of {name}")

    table = [[index(t, add_line) for t in row] for row in table_rows]
    pairs = set()
    if "order" in section.entries:
        o_line, o_text = section.entries["order"]
        for token in re.split(r"[\s,;]+", o_text.strip()):
            if not token:
                continue
            m = _ORDER_PAIR.fullmatch(token)
            if not m:
                raise ParseError(o_line, 1, f"order pair must read 'a<b', got '{token}'")
            pairs.add((index(m.group(1), o_line), index(m.group(2), o_line)))
    zero = 0
    if "zero" in section.entries:
        z_line, z_text = section.entries["zero"]
        zero = index(z_text.strip(), z_line)
    # transitive closure
    closed = set(pairs)
    while True:
        extra = {(a, d) for a, b in closed for c, d in closed if b == c} - closed
        if not extra:
            break
        closed |= extra
    M = FiniteMonoid.from_pairs(size, table, sorted(closed), zero, names, name)
    problems = M.validate()
    if problems:
        logger.warning("%s: invalid table: %s", name, problems[0])
        raise ValidationError(name, problems[0], section.line)
    return M


def _monoid(section: _Section) -> MonoidHandle:
    if "family" in section.entries:
        line, family = section.entries["family"]
        try:
            return family_handle(family)
        except PrecuError as e:
            raise ParseError(line, 1, e.message)
    return _finite_monoid(section)


def _map(section: _Section, doc: SpecDocument) -> MapDescriptor:
    if "catalog" in section.entries:
        line, name = section.entries["catalog"]
        try:
            return catalog_map(name)
        except PrecuError as e:
            raise ParseError(line, 1, e.message)
    f_line, dom_name = _require(section, "from")
    t_line, cod_name = _require(section, "to")
    i_line, images_text = _require(section, "images")
    dom, cod = _resolve_monoid(doc, dom_name, f_line), _resolve_monoid(doc, cod_name, t_line)
    if not isinstance(dom, FiniteMonoid) or not isinstance(cod, FiniteMonoid):
        raise ValidationError(section.name, "table maps need finite tables on both sides", i_line)
    images = []
    for token in images_text.split():
        try:
            images.append(cod.canonical(int(token) if token.isdigit() else token))
        except ValueError as e:
            raise ParseError(i_line, 1, str(e))
    if len(images) != dom.size:
        raise ValidationError(section.name, f"{len(images)} images for {dom.size} elements", i_line)
    return table_map(section.name, dom, cod, images)


def _resolve_monoid(doc: SpecDocument, name: str, line: int) -> MonoidHandle:
    try:
        return doc.monoid(name.strip())
    except PrecuError:
        raise ParseError(line, 1, f"unknown monoid '{name.strip()}'")


def _system(section: _Section) -> SystemDecl:
    seeds = 3
    if "seeds" in section.entries:
        s_line, s_text = section.entries["seeds"]
        seeds = _int(s_text, s_line, "seeds")
    try:
        if "catalog" in section.entries:
            system = catalog_system(section.entries["catalog"][1])
        else:
            stages = _require(section, "stages")[1].split()
            maps = _require(section, "maps")[1].split()
            system = system_from_lists(section.name, stages, maps)
    except ParseError:
        raise
    except PrecuError as e:
        raise ValidationError(section.name, e.message, section.line)
    return SystemDecl(system, seeds)


def _model(section: _Section, doc: SpecDocument) -> SimplexModel:
    k_line, k_text = _require(section, "k")
    v_line, v_name = _require(section, "V")
    r_line, rho_text = _require(section, "rho")
    k = _int(k_text, k_line, "k")
    v = _resolve_monoid(doc, v_name, v_line)
    try:
        matrix = [[Fraction(c) for c in row] for row in _rows(rho_text, r_line)]
    except (ValueError, ZeroDivisionError):
        raise ParseError(r_line, 1, f"rho must be rows of rationals p/q, got '{rho_text}'")
    model = SimplexModel.linear(section.name, k, v, matrix)
    problems = model.validate()
    if problems:
        raise ValidationError(section.name, problems[0], section.line)
    return model


def parse_command(body: str, line: int = 0) -> RunCommand:
    tokens = body.split()
    name = tokens[0]
    if name not in COMMANDS:
        raise ParseError(line, 1, f"unknown command '{name}'")
    command = RunCommand(name=name, line=line)
    for token in tokens[1:]:
        if "=" in token:
            key, value = token.split("=", 1)
            if key == "budget":
                command.budget = _int(value, line, "budget")
                if command.budget <= 0:
                    raise ParseError(line, 1, "budget must be positive")
            elif key == "expect":
                if value not in EXPECTATIONS:
                    raise ParseError(line, 1, f"expect must be one of {', '.join(EXPECTATIONS)}")
                command.expect = value
            else:
                raise ParseError(line, 1, f"unknown option '{key}'")
        elif command.target is None:
            command.target = token
        else:
            raise ParseError(line, 1, f"unexpected token '{token}'")
    if command.target is None and name != "counterexample":
        raise ParseError(line, 1, f"'{name}' needs a target")
    return command


def _check_targets(doc: SpecDocument) -> None:
    for c in doc.commands:
        if c.target is None:
            continue
        if c.name in ("limit", "commute") and c.target not in doc.systems:
            raise ValidationError(c.target, f"'{c.name}' needs a declared system", c.line)
        if c.name == "model" and c.target not in doc.models:
            raise ValidationError(c.target, "'model' needs a declared model", c.line)
        if c.name in ("check", "classify", "complete") and c.target not in doc.maps:
            try:
                doc.monoid(c.target)
            except PrecuError:
                raise ValidationError(c.target, "unresolved reference", c.line)


def parse_spec(text: str, source: str = "<string>") -> SpecDocument:
    sections = _sections(text)
    if not sections:
        raise ParseError(1, 1, "no declarations")

    doc = SpecDocument(source=source)
    names = set()
    # monoids first so maps and models may refer to later declarations
    order = {"monoid": 0, "map": 1, "system": 2, "model": 3, "run": 4}
    for section in sorted(sections, key=lambda s: order[s.kind]):
        if section.name is not None:
            if section.name in names:
                raise ParseError(section.line, 1, f"'{section.name}' declared twice")
            names.add(section.name)
        if section.kind == "monoid":
            doc.monoids[section.name] = _monoid(section)
        elif section.kind == "map":
            doc.maps[section.name] = _map(section, doc)
        elif section.kind == "system":
            doc.systems[section.name] = _system(section)
        elif section.kind == "model":
            doc.models[section.name] = _model(section, doc)
        else:
            doc.commands += [parse_command(body, lineno) for lineno, body in section.rows]
    _check_targets(doc)
    logger.debug("parsed %s: %s", source, doc.to_dict())
    return doc


def parse_spec_file(path: Union[str, os.PathLike]) -> SpecDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read(), source=str(path))

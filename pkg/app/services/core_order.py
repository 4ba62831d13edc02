"""
Core contract of a positively ordered abelian monoid and the budgeted
decision procedures built on it: order axioms, way-below, suprema of chains,
PreCu / C membership evidence and the categorical predicates on maps.

Every quantifier over "all increasing sequences" is replaced by either a
closed-form family rule or a search bounded by `budget` terms.
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from itertools import product
from typing import Any, Callable, Iterable, List, Optional, Sequence

from app.services.cuts import add_limits, format_limit
from app.services.errors import (
    MixedFamily,
    NoApproximant,
    NoRule,
    NotAMap,
    NotEmbedding,
    NotMonotone,
    UnboundedChain,
    Undecided,
)
from app.utils.settings import settings

logger = logging.getLogger(__name__)


def resolve_budget(budget: Optional[int]) -> int:
    budget = settings.budget if budget is None else budget
    if budget < 1:
        raise ValueError("budget must be at least 1")
    return budget


# ==========================================
# Elements, chains, verdicts
# ==========================================

@dataclass(frozen=True)
class Element:
    family_id: str
    payload: Any

    def __str__(self) -> str:
        return f"{self.family_id}:{self.payload}"


class ChainKind(str, Enum):
    FINITE = "finite"
    STATIONARY = "stationary"
    LAZY = "lazy"


@dataclass(frozen=True, eq=False)
class Chain:
    """
    An increasing sequence of elements. `limit` is the declared limit of the
    base values of the terms (see cuts.py); closed-form sup rules read it.
    """

    term_fn: Callable[[int], Element]
    kind: ChainKind = ChainKind.LAZY
    rapid: bool = False
    limit: Any = None
    stationary_from: Optional[int] = None
    label: str = ""

    @classmethod
    def finite(cls, terms: Sequence[Element], label: str = "", rapid: bool = False) -> "Chain":
        terms = tuple(terms)
        if not terms:
            raise ValueError("finite chain needs at least one term")
        return cls(
            term_fn=lambda n: terms[min(n, len(terms) - 1)],
            kind=ChainKind.FINITE,
            rapid=rapid,
            stationary_from=len(terms) - 1,
            label=label or "finite",
        )

    @classmethod
    def stationary(cls, value: Element, from_index: int = 0, prefix: Sequence[Element] = (),
                   label: str = "", limit: Any = None) -> "Chain":
        prefix = tuple(prefix)[:from_index]
        return cls(
            term_fn=lambda n: prefix[n] if n < len(prefix) else value,
            kind=ChainKind.STATIONARY,
            stationary_from=from_index,
            limit=limit,
            label=label or f"const {value.payload}",
        )

    @classmethod
    def lazy(cls, fn: Callable[[int], Element], limit: Any = None, rapid: bool = False,
             label: str = "") -> "Chain":
        return cls(term_fn=fn, kind=ChainKind.LAZY, rapid=rapid, limit=limit, label=label or "lazy")

    @property
    def is_lazy(self) -> bool:
        return self.kind == ChainKind.LAZY

    def term(self, n: int) -> Element:
        if n < 0:
            raise IndexError(n)
        if not self.is_lazy and n > self.stationary_from:
            n = self.stationary_from
        return self.term_fn(n)

    def explore_length(self, budget: int) -> int:
        if self.is_lazy:
            return budget
        return min(budget, self.stationary_from + 1)

    def prefix(self, length: int) -> List[Element]:
        return [self.term(n) for n in range(length)]

    @property
    def eventual(self) -> Element:
        if self.is_lazy:
            raise ValueError("lazy chain has no declared eventual value")
        return self.term(self.stationary_from)

    def map(self, fn: Callable[[Element], Element], limit: Any = None, label: str = "") -> "Chain":
        return Chain(
            term_fn=lambda n: fn(self.term(n)),
            kind=self.kind,
            rapid=False,
            limit=limit,
            stationary_from=self.stationary_from,
            label=label or self.label,
        )

    def shifted(self, offset: int) -> "Chain":
        """The tail starting at `offset`; same supremum."""
        if offset == 0:
            return self
        stationary_from = None if self.is_lazy else max(self.stationary_from - offset, 0)
        return Chain(
            term_fn=lambda n: self.term(n + offset),
            kind=self.kind,
            rapid=self.rapid,
            limit=self.limit,
            stationary_from=stationary_from,
            label=f"{self.label}[{offset}:]",
        )


def add_chains(handle: "MonoidHandle", c1: Chain, c2: Chain) -> Chain:
    if c1.is_lazy or c2.is_lazy:
        return Chain.lazy(
            lambda n: handle.add(c1.term(n), c2.term(n)),
            limit=add_limits(c1.limit, c2.limit),
            label=f"({c1.label})+({c2.label})",
        )
    start = max(c1.stationary_from, c2.stationary_from)
    return Chain(
        term_fn=lambda n: handle.add(c1.term(n), c2.term(n)),
        kind=ChainKind.STATIONARY,
        stationary_from=start,
        limit=add_limits(c1.limit, c2.limit),
        label=f"({c1.label})+({c2.label})",
    )


@dataclass(frozen=True)
class ChainWitness:
    chain: Chain
    explored: int


class Verdict(str, Enum):
    TRUE = "True"
    FALSE = "False"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Trivalent:
    verdict: Verdict
    budget_spent: int = 0
    witness: Any = None
    reason: str = ""

    @classmethod
    def true(cls, spent: int = 0, witness: Any = None, reason: str = "") -> "Trivalent":
        return cls(Verdict.TRUE, spent, witness, reason)

    @classmethod
    def false(cls, spent: int = 0, witness: Any = None, reason: str = "") -> "Trivalent":
        return cls(Verdict.FALSE, spent, witness, reason)

    @classmethod
    def unknown(cls, spent: int = 0, witness: Any = None, reason: str = "") -> "Trivalent":
        return cls(Verdict.UNKNOWN, spent, witness, reason)

    @classmethod
    def of(cls, value: Optional[bool], spent: int = 0, witness: Any = None, reason: str = "") -> "Trivalent":
        if value is None:
            return cls.unknown(spent, witness, reason)
        return cls(Verdict.TRUE if value else Verdict.FALSE, spent, witness, reason)

    @property
    def is_true(self) -> bool:
        return self.verdict == Verdict.TRUE

    @property
    def is_false(self) -> bool:
        return self.verdict == Verdict.FALSE

    @property
    def is_unknown(self) -> bool:
        return self.verdict == Verdict.UNKNOWN

    def as_bool(self) -> bool:
        if self.is_unknown:
            raise Undecided(self.reason or "verdict is Unknown at this budget")
        return self.is_true


class SupStatus(str, Enum):
    SUP = "Sup"
    NO_SUP = "NoSup"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class SupVerdict:
    status: SupStatus
    value: Optional[Element] = None
    witness: Any = None
    budget_spent: int = 0
    reason: str = ""

    @classmethod
    def sup(cls, value: Element, witness: Any = None, spent: int = 0, reason: str = "") -> "SupVerdict":
        return cls(SupStatus.SUP, value, witness, spent, reason)

    @classmethod
    def no_sup(cls, witness: Any = None, spent: int = 0, reason: str = "") -> "SupVerdict":
        return cls(SupStatus.NO_SUP, None, witness, spent, reason)

    @classmethod
    def unknown(cls, spent: int = 0, reason: str = "") -> "SupVerdict":
        return cls(SupStatus.UNKNOWN, None, None, spent, reason)

    @property
    def found(self) -> bool:
        return self.status == SupStatus.SUP


class MonoidClass(str, Enum):
    PRECU = "PreCu"
    C = "C"
    CU = "Cu"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class BoundedChain:
    chain: Chain
    bound: Optional[Element]


@dataclass(frozen=True)
class Preimage:
    element: Optional[Element] = None
    # evidence that no preimage exists (a chain without supremum, ...)
    refutation: Any = None

    @property
    def found(self) -> bool:
        return self.element is not None

    @property
    def refuted(self) -> bool:
        return self.refutation is not None


# ==========================================
# The monoid contract
# ==========================================

class MonoidHandle(ABC):
    """
    A registered monoid. Subclasses supply the payload rules; the generic
    procedures below (way_below, sup_chain, ...) only talk to this interface.
    """

    def __init__(self, family_id: str, claimed_class: MonoidClass = MonoidClass.UNKNOWN,
                 all_compact: bool = False):
        self.family_id = family_id
        self.claimed_class = claimed_class
        self.all_compact = all_compact

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.family_id}>"

    # --- payloads ---
    @abstractmethod
    def zero_payload(self) -> Any: ...

    def canonical(self, payload: Any) -> Any:
        """Validate a payload and bring it into canonical form; raise ValueError if invalid."""
        return payload

    def element(self, payload: Any) -> Element:
        return Element(self.family_id, self.canonical(payload))

    @property
    def zero(self) -> Element:
        return Element(self.family_id, self.zero_payload())

    def check(self, *xs: Element) -> None:
        for x in xs:
            if not isinstance(x, Element) or x.family_id != self.family_id:
                raise MixedFamily(f"{x} does not belong to {self.family_id}")

    def format(self, x: Element) -> str:
        return str(x.payload)

    # --- structure ---
    @abstractmethod
    def add(self, x: Element, y: Element) -> Element: ...

    @abstractmethod
    def leq(self, x: Element, y: Element) -> bool: ...

    def eq(self, x: Element, y: Element) -> bool:
        return self.leq(x, y) and self.leq(y, x)

    def identical(self, x: Element, y: Element) -> bool:
        """Equality of the underlying values; quotient carriers override it."""
        return x == y

    def value_limit(self, x: Element) -> Any:
        """Declared limit of the constant chain at x (its base value), if the family has one."""
        return None

    def way_below_rule(self, x: Element, y: Element) -> Optional[bool]:
        """Closed-form ≪, or None if the family has none for this pair."""
        return None

    def way_below_verdict(self, x: Element, y: Element, budget: int) -> Optional["Trivalent"]:
        """A complete verdict with its own witness, for carriers that decide ≪ themselves."""
        return None

    def sup_rule(self, chain: Chain, budget: int) -> Optional[SupVerdict]:
        """Closed-form supremum of a lazy chain, or None."""
        return None

    def approximant_chain(self, x: Element) -> Optional[Chain]:
        """A rapidly increasing chain with supremum x."""
        return None

    def approximant(self, x: Element, n: int) -> Element:
        chain = self.approximant_chain(x)
        if chain is None:
            raise NoApproximant(f"{self.family_id} provides no approximants")
        return chain.term(n)

    def enumerate(self, index: int) -> Optional[Element]:
        return None

    # --- carrier ---
    @property
    def is_finite(self) -> bool:
        return False

    def elements(self) -> List[Element]:
        raise NotImplementedError(f"{self.family_id} has an infinite carrier")

    def sample(self, count: int) -> List[Element]:
        if self.is_finite:
            return self.elements()
        seen: List[Element] = []
        for i in range(count * 4):
            if len(seen) >= count:
                break
            x = self.enumerate(i)
            if x is not None and x not in seen:
                seen.append(x)
        return seen

    @cached_property
    def height(self) -> int:
        """Length of the longest strict chain minus one (finite carriers)."""
        elems = self.elements()
        depth = {}
        for x in sorted(elems, key=lambda e: sum(self.leq(z, e) for z in elems)):
            below = [depth[z] for z in depth if self.leq(z, x) and not self.leq(x, z)]
            depth[x] = 1 + max(below, default=-1)
        return max(depth.values(), default=0)

    # --- probes used by classify ---
    def probe_chains(self) -> List[BoundedChain]:
        return []

    def unbounded_chain(self) -> Optional[Chain]:
        return None

    # --- completion support (see completion.py) ---
    def principal_cut(self, x: Element):
        return None

    def chain_cut(self, chain: Chain, budget: int):
        return None


# ==========================================
# Map descriptors
# ==========================================

@dataclass(frozen=True, eq=False)
class MapDescriptor:
    name: str
    dom: MonoidHandle
    cod: MonoidHandle
    fn: Callable[[Element], Element]
    # how declared chain limits transform under the map
    limit_map: Optional[Callable[[Any], Any]] = None
    preimage: Optional[Callable[[Element, int], Preimage]] = None

    def __call__(self, x: Element) -> Element:
        self.dom.check(x)
        y = self.fn(x)
        self.cod.check(y)
        return y

    def map_chain(self, chain: Chain) -> Chain:
        limit = None
        if self.limit_map is not None and chain.limit is not None:
            limit = self.limit_map(chain.limit)
        return chain.map(self, limit=limit, label=f"{self.name}({chain.label})")

    def compose(self, inner: "MapDescriptor") -> "MapDescriptor":
        """self ∘ inner"""
        if inner.cod.family_id != self.dom.family_id:
            raise MixedFamily(f"cannot compose {self.name} after {inner.name}")
        limit_map = None
        if self.limit_map is not None and inner.limit_map is not None:
            limit_map = lambda v: self.limit_map(inner.limit_map(v))  # noqa: E731
        return MapDescriptor(
            name=f"{self.name}∘{inner.name}",
            dom=inner.dom,
            cod=self.cod,
            fn=lambda x: self(inner(x)),
            limit_map=limit_map,
        )


def identity_map(handle: MonoidHandle) -> MapDescriptor:
    return MapDescriptor(
        name=f"id_{handle.family_id}",
        dom=handle,
        cod=handle,
        fn=lambda x: x,
        limit_map=lambda v: v,
        preimage=lambda x, budget: Preimage(element=x),
    )


def zero_map(dom: MonoidHandle, cod: MonoidHandle) -> MapDescriptor:
    return MapDescriptor(name=f"0_{dom.family_id}", dom=dom, cod=cod, fn=lambda x: cod.zero)


# ==========================================
# Reports
# ==========================================

class Status(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    UNKNOWN = "unknown"


def status_of(verdict: Trivalent) -> Status:
    if verdict.is_true:
        return Status.PASS
    if verdict.is_false:
        return Status.FAIL
    return Status.UNKNOWN


@dataclass
class CheckResult:
    property: str
    status: Status
    witness: Any = None
    detail: str = ""

    def to_dict(self) -> dict:
        out = {"property": self.property, "status": self.status.value}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class EvidenceReport:
    subject: str
    checks: List[CheckResult] = field(default_factory=list)
    exhaustive: bool = False
    budget_spent: int = 0
    notes: List[str] = field(default_factory=list)

    def add(self, prop: str, status: Status, witness: Any = None, detail: str = "") -> CheckResult:
        result = CheckResult(prop, status, witness, detail)
        self.checks.append(result)
        return result

    @property
    def status(self) -> Status:
        if any(c.status == Status.FAIL for c in self.checks):
            return Status.FAIL
        if any(c.status == Status.UNKNOWN for c in self.checks):
            return Status.UNKNOWN
        return Status.PASS

    @property
    def passed(self) -> bool:
        return self.status == Status.PASS

    @property
    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if c.status == Status.FAIL]

    def summary_word(self) -> str:
        if self.status == Status.FAIL:
            return "disproof"
        if self.status == Status.UNKNOWN:
            return "unknown"
        return "pass" if self.exhaustive else "evidence-pass"

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "status": self.status.value,
            "summary": self.summary_word(),
            "exhaustive": self.exhaustive,
            "budget_spent": self.budget_spent,
            "checks": [c.to_dict() for c in self.checks],
            "notes": list(self.notes),
        }


def render(value: Any, handle: Optional[MonoidHandle] = None, terms: int = 6) -> Any:
    """Turn witnesses into JSON-friendly values."""
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, Element):
        if handle is not None and handle.family_id == value.family_id:
            return handle.format(value)
        return str(value)
    if isinstance(value, ChainWitness):
        shown = min(value.explored, terms)
        return {
            "chain": value.chain.label,
            "prefix": [render(x, handle) for x in value.chain.prefix(shown)],
            "explored": value.explored,
            "limit": format_limit(value.chain.limit),
        }
    if isinstance(value, Chain):
        return render(ChainWitness(value, value.explore_length(terms)), handle, terms)
    if isinstance(value, dict):
        return {str(k): render(v, handle, terms) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [render(v, handle, terms) for v in value]
    return str(value)


# ==========================================
# Order axioms
# ==========================================

def _same_family(handle: MonoidHandle, sample: Sequence[Element]) -> None:
    if not sample:
        raise ValueError("sample must be nonempty")
    families = {x.family_id for x in sample}
    if len(families) > 1:
        raise MixedFamily(f"sample mixes families {sorted(families)}")
    handle.check(*sample)


def check_order_axioms(handle: MonoidHandle, sample: Sequence[Element]) -> EvidenceReport:
    _same_family(handle, sample)
    sample = list(dict.fromkeys(sample))
    report = EvidenceReport(subject=f"order axioms of {handle.family_id}", exhaustive=handle.is_finite)
    f = handle.format

    def first(pred: Callable[..., bool], arity: int):
        for combo in product(sample, repeat=arity):
            if not pred(*combo):
                return [f(x) for x in combo]
        return None

    leq, add, zero = handle.leq, handle.add, handle.zero
    axioms = [
        ("reflexive", 1, lambda x: leq(x, x)),
        ("antisymmetric", 2, lambda x, y: not (leq(x, y) and leq(y, x)) or handle.identical(x, y)),
        ("transitive", 3, lambda x, y, z: not (leq(x, y) and leq(y, z)) or leq(x, z)),
        ("add-compatible", 3, lambda x, y, z: not leq(x, y) or leq(add(x, z), add(y, z))),
        ("positive", 1, lambda x: leq(zero, x)),
        ("algebraic-order", 2, lambda x, z: leq(x, add(x, z))),
        ("commutative", 2, lambda x, y: handle.eq(add(x, y), add(y, x))),
        ("associative", 3, lambda x, y, z: handle.eq(add(add(x, y), z), add(x, add(y, z)))),
        ("zero-neutral", 1, lambda x: handle.eq(add(x, zero), x)),
    ]
    for name, arity, pred in axioms:
        witness = first(pred, arity)
        report.add(name, Status.PASS if witness is None else Status.FAIL, witness)
    report.budget_spent = len(sample)
    logger.debug("order axioms %s: %s", handle.family_id, report.status.value)
    return report


# ==========================================
# Way-below and compactness
# ==========================================

def _dominated_in(handle: MonoidHandle, x: Element, chain: Chain, budget: int):
    """Index of the first explored term dominating x, and the number of terms explored."""
    length = chain.explore_length(budget)
    for n in range(length):
        if handle.leq(x, chain.term(n)):
            return n, n + 1
    return None, length


def separating_chain(handle: MonoidHandle, x: Element, y: Element) -> Chain:
    """An increasing chain with supremum y; used as the witness of x ≪ y failing."""
    if not handle.leq(x, y):
        return Chain.stationary(y, label=f"const {handle.format(y)}")
    chain = handle.approximant_chain(y)
    if chain is None:
        raise NoApproximant(f"{handle.family_id} has no approximant for {handle.format(y)}")
    return chain


def way_below(handle: MonoidHandle, x: Element, y: Element, budget: Optional[int] = None) -> Trivalent:
    budget = resolve_budget(budget)
    handle.check(x, y)

    verdict = handle.way_below_verdict(x, y, budget)
    if verdict is not None:
        return verdict

    if handle.is_finite and handle.way_below_rule(x, y) is None:
        # every increasing chain in a finite carrier is stationary
        if handle.leq(x, y):
            return Trivalent.true(1, witness=y, reason="finite carrier: x ≤ y")
        return Trivalent.false(1, witness=ChainWitness(Chain.stationary(y), 1), reason="x ≰ y")

    rule = handle.way_below_rule(x, y)
    if rule is True:
        return Trivalent.true(0, reason="closed-form rule")
    if rule is False:
        chain = separating_chain(handle, x, y)
        hit, spent = _dominated_in(handle, x, chain, budget)
        if hit is not None:
            logger.warning("%s: way-below rule disagrees with witness chain at term %d", handle.family_id, hit)
            return Trivalent.unknown(spent, reason="rule and witness chain disagree")
        return Trivalent.false(spent, witness=ChainWitness(chain, spent), reason="closed-form rule")

    try:
        if not handle.leq(x, y):
            chain = Chain.stationary(y)
            return Trivalent.false(1, witness=ChainWitness(chain, 1), reason="x ≰ y")
        chain = handle.approximant_chain(y)
        if chain is None:
            raise NoRule(f"{handle.family_id} has no closed form, approximant or finite carrier")
        hit, spent = _dominated_in(handle, x, chain, budget)
    except Undecided as e:
        return Trivalent.unknown(0, reason=e.message)
    if hit is not None and chain.rapid:
        # x ≤ a_k ≪ a_{k+1} ≤ y
        return Trivalent.true(spent, witness=chain.term(hit), reason=f"dominated by approximant {hit}")
    logger.debug("way_below %s: budget %d exhausted", handle.family_id, budget)
    return Trivalent.unknown(spent, witness=ChainWitness(chain, spent), reason="budget exhausted")


def is_compact(handle: MonoidHandle, x: Element, budget: Optional[int] = None) -> Trivalent:
    return way_below(handle, x, x, budget)


# ==========================================
# Suprema
# ==========================================

def check_monotone(handle: MonoidHandle, chain: Chain, budget: int) -> List[Element]:
    prefix = chain.prefix(chain.explore_length(budget))
    for n in range(len(prefix) - 1):
        handle.check(prefix[n])
        if not handle.leq(prefix[n], prefix[n + 1]):
            raise NotMonotone(
                f"{chain.label}: term {n} = {handle.format(prefix[n])} "
                f"is not below term {n + 1} = {handle.format(prefix[n + 1])}"
            )
    return prefix


def check_rapid(handle: MonoidHandle, chain: Chain, budget: int) -> Trivalent:
    """Every explored pair of consecutive terms satisfies ≪."""
    length = chain.explore_length(budget)
    spent = 0
    for n in range(max(length - 1, 1)):
        verdict = way_below(handle, chain.term(n), chain.term(n + 1), budget)
        spent += verdict.budget_spent + 1
        if not verdict.is_true:
            return Trivalent(verdict.verdict, spent, witness=n, reason=f"terms {n}, {n + 1}")
    return Trivalent.true(spent)


def _finite_sup(handle: MonoidHandle, prefix: List[Element]) -> SupVerdict:
    last = prefix[-1]
    above = [z for z in handle.elements() if handle.leq(last, z) and not handle.leq(z, last)]
    if not above:
        return SupVerdict.sup(last, witness="maximal element reached", spent=len(prefix))
    increases = sum(1 for a, b in zip(prefix, prefix[1:]) if not handle.leq(b, a))
    if increases >= handle.height:
        return SupVerdict.sup(last, witness="chain height exhausted", spent=len(prefix))
    return SupVerdict.unknown(len(prefix), reason="lazy chain on a finite carrier not yet stationary")


def sup_chain(handle: MonoidHandle, chain: Chain, budget: Optional[int] = None) -> SupVerdict:
    budget = resolve_budget(budget)
    prefix = check_monotone(handle, chain, budget)
    spent = len(prefix)

    # 1. stationary and finite chains
    if not chain.is_lazy:
        return SupVerdict.sup(chain.eventual, witness="stationary", spent=spent)

    # 2. closed-form family rule
    verdict = handle.sup_rule(chain, budget)
    if verdict is not None:
        if verdict.found:
            bad = next((x for x in prefix if not handle.leq(x, verdict.value)), None)
            if bad is not None:
                logger.warning("%s: sup rule value is not an upper bound of %s", handle.family_id, chain.label)
                return SupVerdict.unknown(spent, reason="sup rule failed the upper-bound check")
        return SupVerdict(verdict.status, verdict.value, verdict.witness, spent, verdict.reason)

    # 3. exhaustive on finite carriers
    if handle.is_finite:
        return _finite_sup(handle, prefix)

    logger.debug("sup_chain %s: no rule for %s", handle.family_id, chain.label)
    return SupVerdict.unknown(spent, reason="no closed-form rule")


# ==========================================
# Membership evidence
# ==========================================

def check_precu_membership(handle: MonoidHandle, sample: Sequence[Element],
                           budget: Optional[int] = None) -> EvidenceReport:
    budget = resolve_budget(budget)
    _same_family(handle, sample)
    f = handle.format
    if handle.is_finite:
        sample = handle.elements()
    sample = list(dict.fromkeys(sample))
    report = EvidenceReport(subject=f"PreCu membership of {handle.family_id}", exhaustive=handle.is_finite)

    # 1. every element is the sup of a rapidly increasing approximant chain
    for x in sample:
        if handle.is_finite:
            chain = handle.approximant_chain(x) or Chain.stationary(x)
        else:
            chain = handle.approximant_chain(x)
            if chain is None:
                raise NoApproximant(f"{handle.family_id}: no approximant for {f(x)}")
        try:
            check_monotone(handle, chain, budget)
        except NotMonotone as e:
            report.add("approximant", Status.FAIL, f(x), e.message)
            continue
        rapid = check_rapid(handle, chain, budget)
        report.budget_spent += rapid.budget_spent
        if not rapid.is_true:
            report.add("approximant rapidly increasing", status_of(rapid), f(x), rapid.reason)
            continue
        sup = sup_chain(handle, chain, budget)
        report.budget_spent += sup.budget_spent
        if sup.found and handle.eq(sup.value, x):
            report.add("approximant supremum", Status.PASS, f(x))
        elif sup.status == SupStatus.UNKNOWN:
            report.add("approximant supremum", Status.UNKNOWN, f(x), sup.reason)
        else:
            report.add("approximant supremum", Status.FAIL, render(ChainWitness(chain, budget), handle))

    # 2. ≪ is compatible with addition
    pairs = [(x, y) for x, y in product(sample, repeat=2) if way_below(handle, x, y, budget).is_true]
    limit = None if handle.is_finite else 40
    quads = [(p, q) for p, q in product(pairs, repeat=2)][:limit]
    bad = None
    for (x, y), (z, t) in quads:
        if not way_below(handle, handle.add(x, z), handle.add(y, t), budget).is_true:
            bad = [f(x), f(y), f(z), f(t)]
            break
    report.add("way-below additive", Status.FAIL if bad else Status.PASS, bad)

    # 3. suprema are compatible with addition
    if handle.is_finite:
        report.notes.append("suprema of chains in a finite carrier are eventual values")
        report.add("sup additive", Status.PASS)
    else:
        status, witness = Status.PASS, None
        for x, y in list(product(sample, repeat=2))[:25]:
            summed = add_chains(handle, handle.approximant_chain(x), handle.approximant_chain(y))
            sup = sup_chain(handle, summed, budget)
            if sup.status == SupStatus.UNKNOWN:
                status = Status.UNKNOWN
            elif not (sup.found and handle.eq(sup.value, handle.add(x, y))):
                status, witness = Status.FAIL, [f(x), f(y)]
                break
        report.add("sup additive", status, witness)

    logger.debug("PreCu membership %s: %s", handle.family_id, report.status.value)
    return report


def check_c_membership(handle: MonoidHandle, chains: Iterable[BoundedChain],
                       budget: Optional[int] = None) -> EvidenceReport:
    budget = resolve_budget(budget)
    report = EvidenceReport(subject=f"C membership of {handle.family_id}", exhaustive=handle.is_finite)
    for item in chains:
        if item.bound is None:
            raise UnboundedChain(f"{item.chain.label} has no declared bound")
        prefix = check_monotone(handle, item.chain, budget)
        if any(not handle.leq(x, item.bound) for x in prefix):
            report.add("declared bound", Status.FAIL, render(ChainWitness(item.chain, len(prefix)), handle))
            continue
        sup = sup_chain(handle, item.chain, budget)
        report.budget_spent += sup.budget_spent
        witness = render(ChainWitness(item.chain, len(prefix)), handle)
        if sup.found:
            report.add("bounded sup", Status.PASS, witness, f"sup = {handle.format(sup.value)}")
        elif sup.status == SupStatus.NO_SUP:
            report.add("bounded sup", Status.FAIL, witness, sup.reason or "no supremum")
        else:
            report.add("bounded sup", Status.UNKNOWN, witness, sup.reason)
    if handle.is_finite:
        report.notes.append("finite carrier: every increasing chain is stationary")
    logger.debug("C membership %s: %s", handle.family_id, report.status.value)
    return report


# ==========================================
# Maps
# ==========================================

def _map_sample(dom: MonoidHandle, sample: Optional[Sequence[Element]], budget: int) -> List[Element]:
    if dom.is_finite:
        return dom.elements()
    if sample is None:
        return dom.sample(min(budget, 10))
    return list(dict.fromkeys(sample))


def is_precu_morphism(f: MapDescriptor, dom: MonoidHandle, cod: MonoidHandle,
                      sample: Optional[Sequence[Element]] = None,
                      budget: Optional[int] = None) -> EvidenceReport:
    budget = resolve_budget(budget)
    sample = _map_sample(dom, sample, budget)
    fmt = dom.format
    report = EvidenceReport(subject=f"PreCu morphism {f.name}", exhaustive=dom.is_finite and cod.is_finite)

    def first_failure(pred, arity):
        for combo in product(sample, repeat=arity):
            if not pred(*combo):
                return [fmt(x) for x in combo]
        return None

    try:
        images = {x: f(x) for x in sample}
    except (ValueError, KeyError) as e:
        report.add("total", Status.FAIL, detail=str(e))
        return report

    report.add("zero", Status.PASS if cod.eq(f(dom.zero), cod.zero) else Status.FAIL)
    bad = first_failure(lambda x, y: cod.eq(f(dom.add(x, y)), cod.add(images[x], images[y])), 2)
    report.add("additive", Status.FAIL if bad else Status.PASS, bad, NotAMap.code if bad else "")
    bad = first_failure(lambda x, y: not dom.leq(x, y) or cod.leq(images[x], images[y]), 2)
    report.add("order-preserving", Status.FAIL if bad else Status.PASS, bad)

    # ≪ preservation
    status, witness = Status.PASS, None
    for x, y in product(sample, repeat=2):
        if not way_below(dom, x, y, budget).is_true:
            continue
        image = way_below(cod, images[x], images[y], budget)
        if image.is_false:
            status, witness = Status.FAIL, [fmt(x), fmt(y)]
            break
        if image.is_unknown:
            status = Status.UNKNOWN
    report.add("way-below preserving", status, witness)

    # sup preservation on approximant chains and probe chains
    chains = [c for c in (dom.approximant_chain(x) for x in sample) if c is not None]
    chains += [p.chain for p in dom.probe_chains()]
    status, witness = Status.PASS, None
    for chain in chains:
        if not chain.is_lazy:
            continue
        sup = sup_chain(dom, chain, budget)
        if not sup.found:
            continue
        image_sup = sup_chain(cod, f.map_chain(chain), budget)
        if image_sup.found and cod.eq(image_sup.value, f(sup.value)):
            continue
        if image_sup.status == SupStatus.UNKNOWN:
            status = Status.UNKNOWN
            continue
        status, witness = Status.FAIL, render(ChainWitness(chain, budget), dom)
        break
    report.add("sup preserving", status, witness)
    logger.debug("PreCu morphism %s: %s", f.name, report.status.value)
    return report


def is_order_embedding(f: MapDescriptor, dom: MonoidHandle, cod: MonoidHandle,
                       sample: Optional[Sequence[Element]] = None,
                       budget: Optional[int] = None) -> EvidenceReport:
    budget = resolve_budget(budget)
    sample = _map_sample(dom, sample, budget)
    fmt = dom.format
    report = EvidenceReport(subject=f"order embedding {f.name}", exhaustive=dom.is_finite and cod.is_finite)
    images = {x: f(x) for x in sample}

    order_bad = None
    for a, b in product(sample, repeat=2):
        if cod.leq(images[a], images[b]) and not dom.leq(a, b):
            order_bad = [fmt(a), fmt(b)]
            break
    report.add("order reflecting", Status.FAIL if order_bad else Status.PASS, order_bad)

    # ≪ reflection: f(a) ≪ f(b) implies a ≪ b
    status, witness = Status.PASS, None
    for a, b in product(sample, repeat=2):
        image = way_below(cod, images[a], images[b], budget)
        if not image.is_true:
            continue
        source = way_below(dom, a, b, budget)
        if source.is_false:
            status, witness = Status.FAIL, [fmt(a), fmt(b)]
            break
        if source.is_unknown:
            status = Status.UNKNOWN
    report.add("way-below reflecting", status, witness)
    if status != Status.UNKNOWN:
        agree = (order_bad is None) == (status == Status.PASS)
        report.add("characterizations agree", Status.PASS if agree else Status.FAIL)
    return report


def is_hereditary(f: MapDescriptor, dom: MonoidHandle, cod: MonoidHandle,
                  cod_sample: Sequence[Element], budget: Optional[int] = None,
                  dom_sample: Optional[Sequence[Element]] = None) -> EvidenceReport:
    budget = resolve_budget(budget)
    dom_sample = _map_sample(dom, dom_sample, budget)
    embedding = is_order_embedding(f, dom, cod, dom_sample, budget)
    if embedding.status == Status.FAIL:
        raise NotEmbedding(f"{f.name} is not an order-embedding: {embedding.failures[0].witness}")

    report = EvidenceReport(subject=f"hereditary {f.name}", exhaustive=dom.is_finite and cod.is_finite)
    images = [(y, f(y)) for y in dom_sample]
    for x in cod_sample:
        cod.check(x)
        try:
            above = next((y for y, fy in images if cod.leq(x, fy)), None)
        except Undecided:
            report.add("preimage", Status.UNKNOWN, cod.format(x), "comparison undecided")
            continue
        if above is None:
            continue
        witness = {"x": cod.format(x), "below": dom.format(above)}
        # 1. a certified preimage procedure
        if f.preimage is not None:
            pre = f.preimage(x, budget)
            if pre.found:
                report.add("preimage", Status.PASS, witness)
                continue
            if pre.refuted:
                witness["refutation"] = render(pre.refutation, dom)
                report.add("preimage", Status.FAIL, witness, "no preimage")
                continue
        # 2. search through the domain enumerator
        candidates = dom.elements() if dom.is_finite else [dom.enumerate(i) for i in range(budget)]
        hit = next((z for z in candidates if z is not None and cod.eq(f(z), x)), None)
        if hit is not None:
            witness["preimage"] = dom.format(hit)
            report.add("preimage", Status.PASS, witness)
        elif dom.is_finite:
            report.add("preimage", Status.FAIL, witness, "exhaustive search found no preimage")
        else:
            report.add("preimage", Status.UNKNOWN, witness, "search budget exhausted")
    report.budget_spent = len(cod_sample)
    return report


# ==========================================
# Classification
# ==========================================

@dataclass
class Classification:
    family_id: str
    precu: EvidenceReport
    c: EvidenceReport
    cu: EvidenceReport

    def summary(self) -> str:
        def word(report: EvidenceReport) -> str:
            text = report.summary_word()
            failure = next(iter(report.failures), None)
            if failure is not None and isinstance(failure.witness, dict) and "chain" in failure.witness:
                text += f" (witness chain {failure.witness['chain']})"
            return text

        return f"PreCu: {word(self.precu)}; C: {word(self.c)}; Cu: {word(self.cu)}"

    def to_dict(self) -> dict:
        return {
            "family": self.family_id,
            "summary": self.summary(),
            "precu": self.precu.to_dict(),
            "c": self.c.to_dict(),
            "cu": self.cu.to_dict(),
        }


def classify(handle: MonoidHandle, budget: Optional[int] = None) -> Classification:
    budget = resolve_budget(budget)
    sample = handle.sample(min(budget, 10))
    precu = check_precu_membership(handle, sample, budget)
    c = check_c_membership(handle, handle.probe_chains(), budget)

    cu = EvidenceReport(subject=f"Cu membership of {handle.family_id}", exhaustive=handle.is_finite)
    if c.status == Status.FAIL:
        cu.add("bounded sups", Status.FAIL, c.failures[0].witness, "not in C")
    else:
        cu.add("bounded sups", c.status)
    chain = handle.unbounded_chain()
    if handle.is_finite:
        cu.notes.append("finite carrier: every increasing chain is stationary")
    elif chain is not None:
        sup = sup_chain(handle, chain, budget)
        witness = render(ChainWitness(chain, min(budget, 6)), handle)
        if sup.found:
            cu.add("unbounded sup", Status.PASS, witness, f"sup = {handle.format(sup.value)}")
        elif sup.status == SupStatus.NO_SUP:
            cu.add("unbounded sup", Status.FAIL, witness, sup.reason or "no supremum")
        else:
            cu.add("unbounded sup", Status.UNKNOWN, witness, sup.reason)
    else:
        cu.add("unbounded sup", Status.UNKNOWN, detail="no unbounded probe chain")
    return Classification(handle.family_id, precu, c, cu)

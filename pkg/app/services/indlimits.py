"""
Inductive limits of sequences (S_i, f_i) in C and in Cu.

An element of the limit is the class of an ascending sequence s = (s_i) with
f_i(s_i) <= s_{i+1}; in C the sequence also carries a bound M_s in the
algebraic limit. Classes are compared by

    s ≼ t  iff  for every i and x ≪ s_i there is m > i with f_{m,i}(x) ≪ t_m

either by a budgeted search or, when every stage describes its way-below
content as a cut and the maps preserve base values, by comparing cuts.
"""
import logging
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Dict, List, Optional

from app.services.catalog import (
    Doubled,
    LinearFamily,
    catalog_map,
    chain_inclusion,
    dyadic_level,
    family_handle,
    ramp,
    scaled_dyadic_inclusion,
)
from app.services.completion import CompletionMonoid, IntervalForm, completion_of, extension_map, lift_morphism
from app.services.core_order import (
    BoundedChain,
    Chain,
    ChainWitness,
    Element,
    EvidenceReport,
    MapDescriptor,
    MonoidClass,
    MonoidHandle,
    Status,
    SupStatus,
    SupVerdict,
    Trivalent,
    identity_map,
    is_precu_morphism,
    render,
    resolve_budget,
    status_of,
    sup_chain,
    way_below,
)
from app.services.cuts import INF, BoxCut, Cut, add_limits, compare_limits, is_exact
from app.services.errors import (
    BudgetExhausted,
    FragmentTooLarge,
    NoApproximant,
    NotMonotone,
    SystemMismatch,
    UnboundedChain,
    UncertifiedMaps,
)

logger = logging.getLogger(__name__)

OPEN = frozenset()


@dataclass(frozen=True)
class SeqFamily:
    """A named family of stage terms: n-th term in S_n, declared limit and optional bound (stage, payload)."""

    term_fn: Callable[[int], Element]
    limit: Any
    bound: Optional[tuple] = None
    label: str = ""


@dataclass(frozen=True, eq=False)
class InductiveSystem:
    name: str
    stage_fn: Callable[[int], MonoidHandle]
    map_fn: Callable[[int], MapDescriptor]
    start: int = 0
    probe: Optional[SeqFamily] = None
    unbounded: Optional[SeqFamily] = None
    _maps: Dict[int, MapDescriptor] = field(default_factory=dict, repr=False)
    _pushed: Dict[tuple, Element] = field(default_factory=dict, repr=False)

    def stage(self, i: int) -> MonoidHandle:
        if i < self.start:
            raise SystemMismatch(f"{self.name} starts at stage {self.start}")
        return self.stage_fn(i)

    def f(self, i: int) -> MapDescriptor:
        if i not in self._maps:
            f = self.map_fn(i)
            if f.dom.family_id != self.stage(i).family_id or f.cod.family_id != self.stage(i + 1).family_id:
                raise SystemMismatch(f"{f.name} does not map stage {i} to stage {i + 1}")
            self._maps[i] = f
        return self._maps[i]

    def push(self, i: int, m: int, x: Element) -> Element:
        """f_{m,i}(x)"""
        if m < i:
            raise ValueError("cannot push to an earlier stage")
        key = (i, m, x)
        if key not in self._pushed:
            self._pushed[key] = x if m == i else self.f(m - 1)(self.push(i, m - 1, x))
        return self._pushed[key]

    def composite(self, m: int, i: int) -> MapDescriptor:
        return MapDescriptor(
            name=f"f_{m},{i}",
            dom=self.stage(i),
            cod=self.stage(m),
            fn=lambda x: self.push(i, m, x),
            limit_map=lambda v: v,
        )


# ==========================================
# Catalog systems
# ==========================================

def dyadic_system() -> InductiveSystem:
    """S_0 -> S_1 -> ... with the scaled inclusions n/2^i ↦ 2n/2^(i+1)."""
    return InductiveSystem(
        name="dyadic",
        stage_fn=lambda i: family_handle(f"S_{i}"),
        map_fn=scaled_dyadic_inclusion,
        probe=SeqFamily(lambda n: family_handle(f"S_{n}").from_value(ramp(1, n)), Fraction(1), (0, Fraction(1)),
                        "1-2^-n"),
        unbounded=SeqFamily(lambda n: family_handle(f"S_{n}").from_value(n), INF, None, "n"),
    )


def naturals_system() -> InductiveSystem:
    """ℕ -> ℕ -> ... with identity maps."""
    N = family_handle("N")
    return InductiveSystem(
        name="N-id",
        stage_fn=lambda i: N,
        map_fn=lambda i: identity_map(N),
        probe=SeqFamily(lambda n: N.from_value(min(n, 2)), 2, (0, 2), "min(n, 2)"),
        unbounded=SeqFamily(lambda n: N.from_value(n), INF, None, "n"),
    )


def chain_system() -> InductiveSystem:
    """T_0 -> T_1 -> ... with the index inclusions."""
    return InductiveSystem(
        name="T_n",
        stage_fn=lambda i: family_handle(f"T_{i}"),
        map_fn=lambda i: chain_inclusion(i, i + 1),
        probe=SeqFamily(lambda n: family_handle(f"T_{n}").from_value(min(n, 2)), 2, (2, 2), "a_min(n,2)"),
        unbounded=SeqFamily(lambda n: family_handle(f"T_{n}").from_value(n), INF, None, "a_n"),
    )


_SYSTEMS = {"dyadic": dyadic_system, "N-id": naturals_system, "T_n": chain_system}
SYSTEM_NAMES = sorted(_SYSTEMS)


@lru_cache(maxsize=None)
def catalog_system(name: str) -> InductiveSystem:
    try:
        return _SYSTEMS[name.strip()]()
    except KeyError:
        raise SystemMismatch(f"unknown system '{name}'")


def system_from_lists(name: str, stages: List[str], maps: List[str], start: int = 0) -> InductiveSystem:
    """Stages and maps by catalog name; the last entry repeats."""
    if not stages or not maps:
        raise SystemMismatch(f"{name}: a system needs stages and maps")
    system = InductiveSystem(
        name=name,
        stage_fn=lambda i: family_handle(stages[min(i - start, len(stages) - 1)]),
        map_fn=lambda i: catalog_map(maps[min(i - start, len(maps) - 1)]),
        start=start,
    )
    for i in range(start, start + max(len(maps), 2)):
        system.f(i)
    return system


def completed_system(system: InductiveSystem) -> InductiveSystem:
    """The system of completions with the lifted maps."""

    def lift(family: Optional[SeqFamily]) -> Optional[SeqFamily]:
        if family is None:
            return None
        return SeqFamily(lambda n: completion_of(system.stage(n)).iota(family.term_fn(n)), family.limit,
                         None, family.label)

    return InductiveSystem(
        name=f"{system.name}-bar",
        stage_fn=lambda i: completion_of(system.stage(i)),
        map_fn=lambda i: lift_morphism(system.f(i)),
        start=system.start,
        probe=lift(system.probe),
        unbounded=lift(system.unbounded),
    )


# ==========================================
# Algebraic limit
# ==========================================

class AlgColimit(MonoidHandle):
    """Pairs (i, x) with x in S_i, identified when their images agree at a common stage."""

    search_stages = 4

    def __init__(self, system: InductiveSystem):
        self.system = system
        super().__init__(f"alg({system.name})", MonoidClass.UNKNOWN)

    def zero_payload(self):
        i = self.system.start
        return (i, self.system.stage(i).zero.payload)

    def at(self, i: int, x: Element) -> Element:
        self.system.stage(i).check(x)
        return Element(self.family_id, (i, x.payload))

    def lift(self, y: Element, m: int) -> Element:
        i, payload = y.payload
        stage = self.system.stage(i)
        return self.system.push(i, m, Element(stage.family_id, payload))

    def format(self, y):
        i, payload = y.payload
        stage = self.system.stage(i)
        return f"phi_{i}({stage.format(Element(stage.family_id, payload))})"

    def add(self, x, y):
        m = max(x.payload[0], y.payload[0])
        return self.at(m, self.system.stage(m).add(self.lift(x, m), self.lift(y, m)))

    def leq(self, x, y):
        m = max(x.payload[0], y.payload[0])
        for k in range(m, m + self.search_stages):
            if self.system.stage(k).leq(self.lift(x, k), self.lift(y, k)):
                return True
        return False


# ==========================================
# Ascending sequences
# ==========================================

@dataclass(frozen=True, eq=False)
class BoundedAscSeq:
    """
    s_n in S_n for n >= start. `eventual_stage = e` means s_n = f_{n,e}(s_e)
    for n > e. `bound` is an element of the algebraic limit, or None for
    sequences of the Cu limit.
    """

    system: InductiveSystem
    term_fn: Callable[[int], Element]
    bound: Optional[Element] = None
    limit: Any = None
    eventual_stage: Optional[int] = None
    rapid: bool = False
    label: str = ""
    _terms: Dict[int, Element] = field(default_factory=dict, repr=False)
    _lock: Any = field(default_factory=threading.Lock, repr=False)

    def term(self, n: int) -> Element:
        e = self.eventual_stage
        if e is not None and n > e:
            return self.system.push(e, n, self.term(e))
        with self._lock:
            if n not in self._terms:
                self._terms[n] = self.term_fn(n)
            return self._terms[n]

    def stages(self, budget: int) -> range:
        start = self.system.start
        if self.eventual_stage is not None:
            return range(start, min(start + budget, self.eventual_stage + 1))
        return range(start, start + budget)


def phi(system: InductiveSystem, i: int, x: Element, alg: Optional[AlgColimit] = None) -> BoundedAscSeq:
    """(0, ..., 0, x, f_i(x), ...)"""
    stage = system.stage(i)
    stage.check(x)
    alg = alg or AlgColimit(system)
    return BoundedAscSeq(
        system=system,
        term_fn=lambda n: x if n == i else system.stage(n).zero,
        bound=alg.at(i, x),
        limit=stage.value_limit(x),
        eventual_stage=i,
        label=f"phi_{i}({stage.format(x)})",
    )


def _same_system(s: BoundedAscSeq, t: BoundedAscSeq) -> None:
    if s.system is not t.system:
        raise SystemMismatch(f"{s.label} and {t.label} live in different systems")


def _compact_term(stage: MonoidHandle, x: Element) -> bool:
    if stage.all_compact or stage.is_finite:
        return True
    if isinstance(stage, CompletionMonoid) and stage.base.all_compact:
        # ι of a compact element; chain classes may be non-compact
        I = x.payload
        return I.form != IntervalForm.CHAIN and I.top is not None
    return False


def _content(stage: MonoidHandle, x: Element, budget: int) -> List[Element]:
    """Elements way below x that stand for all of them: x itself when compact, else approximants."""
    if _compact_term(stage, x):
        return [x]
    chain = stage.approximant_chain(x)
    if chain is None:
        raise NoApproximant(f"{stage.family_id}: no approximant for {stage.format(x)}")
    if not chain.is_lazy:
        return [chain.eventual]
    return chain.prefix(chain.explore_length(min(budget, 8)))


def union_cut(cuts: List[Any], limit: Any, budget: int):
    """Cut of an increasing union of cuts with the declared limit of their values."""
    if not cuts or any(c is None for c in cuts):
        return None
    last = cuts[-1]
    if isinstance(last, BoxCut):
        return BoxCut(tuple(limit)) if isinstance(limit, tuple) else None
    if not isinstance(last, Cut) or limit is None:
        return None
    if compare_limits(last.value, limit, budget) == 0:
        return last
    return Cut(limit, OPEN)


def seq_cut(s: BoundedAscSeq, budget: Optional[int] = None):
    budget = resolve_budget(budget)
    system = s.system
    if s.eventual_stage is not None:
        e = s.eventual_stage
        return system.stage(e).principal_cut(s.term(e))
    stages = s.stages(min(budget, 24))
    cuts = [system.stage(n).principal_cut(s.term(n)) for n in stages]
    return union_cut(cuts, s.limit, budget)


def seq_precsim(s: BoundedAscSeq, t: BoundedAscSeq, budget: Optional[int] = None,
                closed_form: bool = True) -> Trivalent:
    budget = resolve_budget(budget)
    _same_system(s, t)
    if closed_form:
        cs, ct = seq_cut(s, budget), seq_cut(t, budget)
        if cs is not None and ct is not None and type(cs) is type(ct):
            verdict = cs.le(ct, budget)
            if verdict is not None:
                return Trivalent.of(verdict, 1, {"left": cs.key(), "right": ct.key()}, "way-below content")

    system = s.system
    spent = 0
    witnesses = []
    for i in s.stages(budget):
        for x in _content(system.stage(i), s.term(i), budget):
            y, found = x, None
            for m in range(i + 1, i + 1 + budget):
                y = system.f(m - 1)(y)
                spent += 1
                if way_below(system.stage(m), y, t.term(m), budget).is_true:
                    found = m
                    break
            if found is None:
                logger.debug("seq_precsim %s vs %s: stage %d unresolved", s.label, t.label, i)
                return Trivalent.unknown(
                    spent, witness={"stage": i, "element": system.stage(i).format(x)},
                    reason="no later stage found within budget",
                )
            witnesses.append([i, found])
    return Trivalent.true(spent, witness=witnesses[:6], reason="verified on checked prefix")


def add_sequences(s: BoundedAscSeq, t: BoundedAscSeq, alg: Optional[AlgColimit] = None) -> BoundedAscSeq:
    _same_system(s, t)
    system = s.system
    bound = None
    if s.bound is not None and t.bound is not None:
        bound = (alg or AlgColimit(system)).add(s.bound, t.bound)
    eventual = None
    if s.eventual_stage is not None and t.eventual_stage is not None:
        eventual = max(s.eventual_stage, t.eventual_stage)
    return BoundedAscSeq(
        system=system,
        term_fn=lambda n: system.stage(n).add(s.term(n), t.term(n)),
        bound=bound,
        limit=add_limits(s.limit, t.limit),
        eventual_stage=eventual,
        label=f"({s.label})+({t.label})",
    )


def rapid_representative(s: BoundedAscSeq, budget: Optional[int] = None) -> BoundedAscSeq:
    """Equivalent sequence with f_n(s_n) ≪ s_{n+1} on the checked prefix."""
    budget = resolve_budget(budget)
    system = s.system
    checked = s.stages(min(budget, 8))
    if all(_compact_term(system.stage(n), s.term(n)) for n in checked):
        # compact terms are their own approximants
        return BoundedAscSeq(system, s.term, s.bound, s.limit, s.eventual_stage, True, s.label)

    start = system.start

    def diagonal(n: int) -> Element:
        return system.stage(n).approximant(s.term(n), n - start)

    rep = BoundedAscSeq(system, diagonal, s.bound, s.limit, None, True, f"rapid({s.label})")
    for n in checked:
        pushed = system.f(n)(rep.term(n))
        if not way_below(system.stage(n + 1), pushed, rep.term(n + 1), budget).is_true:
            raise NotMonotone(f"diagonal of {s.label} is not rapidly increasing at stage {n}")
    return rep


# ==========================================
# The limit handles
# ==========================================

class InductiveLimit(MonoidHandle):
    """lim_C (bounded=True) or lim_Cu (bounded=False) of a system."""

    def __init__(self, system: InductiveSystem, bounded: bool, budget: Optional[int] = None):
        self.system = system
        self.bounded = bounded
        self.budget = resolve_budget(budget)
        self.alg = AlgColimit(system)
        variant = "C" if bounded else "Cu"
        super().__init__(f"lim_{variant}({system.name})", MonoidClass.C if bounded else MonoidClass.CU)

    # --- elements ---
    def zero_payload(self):
        start = self.system.start
        return phi(self.system, start, self.system.stage(start).zero, self.alg)

    def canonical(self, payload):
        if not isinstance(payload, BoundedAscSeq) or payload.system is not self.system:
            raise SystemMismatch(f"{payload} is not a sequence of {self.system.name}")
        if self.bounded and payload.bound is None:
            raise UnboundedChain(f"{payload.label} has no bound in the algebraic limit")
        return payload

    def phi(self, i: int, x: Element) -> Element:
        seq = phi(self.system, i, x, self.alg)
        if not self.bounded:
            seq = BoundedAscSeq(self.system, seq.term_fn, None, seq.limit, i, False, seq.label)
        return Element(self.family_id, seq)

    def sequence(self, fn: Callable[[int], Element], limit: Any = None, bound: Optional[Element] = None,
                 label: str = "", budget: Optional[int] = None) -> Element:
        """A validated ascending sequence; in C the bound is checked on the explored prefix."""
        budget = resolve_budget(budget or self.budget)
        seq = BoundedAscSeq(self.system, fn, bound if self.bounded else None, limit, label=label or "seq")
        system = self.system
        for n in seq.stages(min(budget, 16)):
            if not system.stage(n + 1).leq(system.f(n)(seq.term(n)), seq.term(n + 1)):
                raise NotMonotone(f"{seq.label}: f_{n}(s_{n}) is not below s_{n + 1}")
            if self.bounded:
                if bound is None:
                    raise UnboundedChain(f"{seq.label} has no bound in the algebraic limit")
                for x in _content(system.stage(n), seq.term(n), budget):
                    if not self.alg.leq(self.alg.at(n, x), bound):
                        raise UnboundedChain(
                            f"{seq.label}: stage {n} exceeds the bound {self.alg.format(bound)}"
                        )
        return self.element(seq)

    def from_family(self, family: SeqFamily) -> Element:
        bound = None
        if family.bound is not None:
            i, value = family.bound
            bound = self.alg.at(i, self.system.stage(i).element(value))
        return self.sequence(family.term_fn, family.limit, bound, family.label)

    def format(self, x):
        cut = self.principal_cut(x)
        return x.payload.label if cut is None else f"{x.payload.label} <{cut.key()}>"

    def key(self, x: Element) -> str:
        cut = self.principal_cut(x)
        return cut.key() if cut is not None else x.payload.label

    # --- structure ---
    def add(self, x, y):
        return Element(self.family_id, add_sequences(x.payload, y.payload, self.alg))

    def precsim(self, x, y, budget: Optional[int] = None) -> Trivalent:
        return seq_precsim(x.payload, y.payload, budget or self.budget)

    def leq(self, x, y):
        return self.precsim(x, y).as_bool()

    def identical(self, x, y):
        return self.eq(x, y)

    def value_limit(self, x):
        return x.payload.limit

    def principal_cut(self, x):
        return seq_cut(x.payload, self.budget)

    def chain_cut(self, chain, budget):
        if not chain.is_lazy:
            return self.principal_cut(chain.eventual)
        prefix = chain.prefix(chain.explore_length(min(budget, 24)))
        return union_cut([self.principal_cut(x) for x in prefix], chain.limit, budget)

    def way_below_verdict(self, x, y, budget):
        return limit_way_below(self, x, y, budget)

    def approximant_chain(self, x):
        rep = rapid_representative(x.payload, self.budget)
        e = rep.eventual_stage
        if e is not None and (self.system.stage(e).all_compact or self.system.stage(e).is_finite):
            return Chain.stationary(self.phi(e, rep.term(e)), label=f"const {rep.label}", limit=rep.limit)
        start = self.system.start
        return Chain.lazy(lambda n: self.phi(start + n, rep.term(start + n)), limit=rep.limit, rapid=True,
                          label=f"phi_n({rep.label})")

    def sup_rule(self, chain, budget):
        return limit_sup(self, chain, budget)

    # --- sampling ---
    def enumerate(self, index):
        system = self.system
        families = [f for f in (system.probe, None if self.bounded else system.unbounded) if f is not None]
        if index % 5 == 4 and index // 5 < len(families):
            return self.from_family(families[index // 5])
        i = system.start + index % 3
        x = system.stage(i).enumerate(index // 3)
        return None if x is None else self.phi(i, x)

    def probe_chains(self):
        family = self.system.probe
        if family is None:
            return []
        start = self.system.start
        chain = Chain.lazy(lambda n: self.phi(start + n, family.term_fn(start + n)), limit=family.limit,
                           label=f"phi_n({family.label})")
        bound = self.from_family(family) if self.bounded else None
        return [BoundedChain(chain, bound)] if bound is not None else []

    def unbounded_chain(self):
        family = self.system.unbounded
        if family is None:
            return None
        start = self.system.start
        return Chain.lazy(lambda n: self.phi(start + n, family.term_fn(start + n)), limit=family.limit,
                          label=f"phi_n({family.label})")


def _certify(system: InductiveSystem, budget: int) -> None:
    for i in range(system.start, system.start + 3):
        stage = system.stage(i)
        report = is_precu_morphism(system.f(i), stage, system.stage(i + 1), stage.sample(6), min(budget, 16))
        if report.status == Status.FAIL:
            failure = report.failures[0]
            raise UncertifiedMaps(f"{system.f(i).name} fails {failure.property}: {failure.witness}")


@lru_cache(maxsize=None)
def limit_in_C(system: InductiveSystem, budget: Optional[int] = None) -> InductiveLimit:
    budget = resolve_budget(budget)
    _certify(system, budget)
    return InductiveLimit(system, bounded=True, budget=budget)


@lru_cache(maxsize=None)
def limit_in_Cu(system: InductiveSystem, budget: Optional[int] = None) -> InductiveLimit:
    budget = resolve_budget(budget)
    _certify(system, budget)
    return InductiveLimit(system, bounded=False, budget=budget)


def limit_way_below(handle: InductiveLimit, x: Element, y: Element, budget: Optional[int] = None) -> Trivalent:
    """[s] ≪ [t] iff [s] ≤ φ_m(t̃_m) for some term of a rapid representative t̃."""
    budget = resolve_budget(budget)
    handle.check(x, y)
    rep = rapid_representative(y.payload, budget)
    spent = 0
    for n in rep.stages(budget):
        spent += 1
        candidate = handle.phi(n, rep.term(n))
        if seq_precsim(x.payload, candidate.payload, budget).is_true:
            return Trivalent.true(spent, witness=candidate, reason=f"below phi_{n} of the representative")
    chain = Chain.lazy(lambda n: handle.phi(handle.system.start + n, rep.term(handle.system.start + n)),
                       limit=rep.limit, label=f"phi_n({rep.label})")
    witness = ChainWitness(chain, spent)
    if rep.eventual_stage is not None:
        return Trivalent.false(spent, witness=witness, reason="below no stage image of an eventual sequence")
    if handle.precsim(x, y, budget).is_false:
        return Trivalent.false(spent, witness=witness, reason="not below")
    cut = seq_cut(x.payload, budget)
    if isinstance(cut, Cut) and rep.limit is not None and not isinstance(rep.limit, tuple):
        if compare_limits(cut.value, rep.limit, budget) in (0, 1):
            return Trivalent.false(spent, witness=witness, reason="content reaches the limit of the sequence")
    return Trivalent.unknown(spent, witness=witness, reason="budget exhausted")


def _alg_bound(handle: InductiveLimit, limit: Any, budget: int) -> Optional[Element]:
    value = limit if is_exact(limit) else limit.upper
    if value == INF:
        return None
    target = math.ceil(value)
    system = handle.system
    for m in range(system.start, system.start + budget):
        stage = system.stage(m)
        if isinstance(stage, LinearFamily) and stage.contains_value(target):
            return handle.alg.at(m, stage.from_value(target))
    return None


def limit_sup(handle: InductiveLimit, chain: Chain, budget: int) -> Optional[SupVerdict]:
    """Supremum of an increasing chain of classes: stagewise largest term among the first n classes."""
    if chain.limit is None:
        return None
    system = handle.system
    start = system.start

    def u(n: int) -> Element:
        stage = system.stage(n)
        candidates = [chain.term(k).payload.term(n) for k in range(n - start + 1)]
        top = next((c for c in reversed(candidates) if all(stage.leq(d, c) for d in candidates)), None)
        if top is None:
            raise BudgetExhausted(f"no largest term at stage {n}")
        return top

    bound = None
    if handle.bounded:
        if chain.limit == INF:
            return SupVerdict.no_sup(ChainWitness(chain, min(budget, 6)), reason="unbounded in the algebraic limit")
        bound = _alg_bound(handle, chain.limit, budget)
        if bound is None:
            return SupVerdict.unknown(reason="no bound found for the supremum")
    seq = BoundedAscSeq(system, u, bound, chain.limit, label=f"sup({chain.label})")
    return SupVerdict.sup(Element(handle.family_id, seq), reason="stagewise supremum")


def explored_classes(lim: InductiveLimit, count: int = 8) -> List[Element]:
    """Stage images of enumerated elements, the probe class and, in Cu, the unbounded class."""
    classes = [x for x in lim.sample(count)]
    if lim.system.probe is not None:
        classes.append(lim.from_family(lim.system.probe))
    chain = lim.unbounded_chain()
    if not lim.bounded and chain is not None:
        top = sup_chain(lim, chain, lim.budget)
        if top.found:
            classes.append(top.value)
    seen: List[Element] = []
    for x in classes:
        if not any(lim.eq(x, y) for y in seen):
            seen.append(x)
    return sorted(seen, key=lambda x: [lim.leq(y, x) for y in seen].count(True))


def limit_report(system: InductiveSystem, budget: Optional[int] = None) -> EvidenceReport:
    """Both limits of a system on an explored fragment: bounded sups, the unbounded class, order shape."""
    budget = resolve_budget(budget)
    report = EvidenceReport(subject=f"inductive limits of {system.name}")
    lim_c, lim_cu = limit_in_C(system, budget), limit_in_Cu(system, budget)

    # 1. lim_C: bounded chains have suprema, unbounded ones do not
    for probe in lim_c.probe_chains():
        sup = sup_chain(lim_c, probe.chain, budget)
        status = Status.PASS if sup.found else (Status.FAIL if sup.status == SupStatus.NO_SUP else Status.UNKNOWN)
        report.add("C: bounded probe has a supremum", status, render(ChainWitness(probe.chain, 6), lim_c),
                   lim_c.key(sup.value) if sup.found else sup.reason)
    unbounded = lim_c.unbounded_chain()
    if unbounded is not None:
        sup = sup_chain(lim_c, unbounded, budget)
        status = Status.PASS if sup.status == SupStatus.NO_SUP else (Status.FAIL if sup.found else Status.UNKNOWN)
        report.add("C: no class above the unbounded family", status, render(ChainWitness(unbounded, 6), lim_c))

    # 2. lim_Cu: the unbounded family has a supremum dominating the fragment
    classes_cu = explored_classes(lim_cu)
    chain = lim_cu.unbounded_chain()
    if chain is not None:
        top = sup_chain(lim_cu, chain, budget)
        if not top.found:
            status = Status.UNKNOWN if top.status == SupStatus.UNKNOWN else Status.FAIL
            report.add("Cu: unbounded class dominates", status)
        else:
            below = [x for x in classes_cu if not lim_cu.leq(x, top.value)]
            compact = way_below(lim_cu, top.value, top.value, budget)
            report.add("Cu: unbounded class dominates", Status.FAIL if below else Status.PASS,
                       [lim_cu.key(x) for x in below] or None, lim_cu.key(top.value))
            status = Status.PASS if compact.is_false else (Status.FAIL if compact.is_true else Status.UNKNOWN)
            report.add("Cu: unbounded class not compact", status)

    # 3. order shape of the explored fragments
    for lim in (lim_c, lim_cu):
        classes = explored_classes(lim)
        incomparable = next(([lim.key(x), lim.key(y)] for x in classes for y in classes
                             if not lim.leq(x, y) and not lim.leq(y, x)), None)
        report.notes.append(f"{lim.family_id}: " + " < ".join(lim.key(x) for x in classes))
        if incomparable is not None:
            report.notes.append(f"{lim.family_id}: incomparable classes {incomparable}")
    report.budget_spent = budget
    return report


# ==========================================
# Limits and completions
# ==========================================

def limit_to_completed(lim: InductiveLimit, rhs: InductiveLimit) -> MapDescriptor:
    """ψ: lim_C(S_i) -> lim_Cu(S̄_i), [(s_n)] ↦ [(ι(s_n))]."""
    system = lim.system

    def fn(x: Element) -> Element:
        s = x.payload
        seq = BoundedAscSeq(
            system=rhs.system,
            term_fn=lambda n: completion_of(system.stage(n)).iota(s.term(n)),
            bound=None,
            limit=s.limit,
            eventual_stage=s.eventual_stage,
            label=f"iota({s.label})",
        )
        return Element(rhs.family_id, seq)

    return MapDescriptor(name="psi", dom=lim, cod=rhs, fn=fn, limit_map=lambda v: v)


def check_limit_completion_commutes(system: InductiveSystem, budget: Optional[int] = None,
                                    seeds_per_stage: int = 3, fragment_cap: int = 64) -> EvidenceReport:
    budget = resolve_budget(budget)
    lim = limit_in_C(system, budget)
    lhs = completion_of(lim)
    rhs = limit_in_Cu(completed_system(system), budget)
    psi = limit_to_completed(lim, rhs)
    gamma = extension_map(psi, rhs, budget)
    report = EvidenceReport(subject=f"completion of lim_C({system.name}) vs lim_Cu of completions")

    # 1. fragments generated by the seeds
    seeds = []
    for i in range(system.start, system.start + seeds_per_stage):
        stage = system.stage(i)
        seeds += [(i, x) for x in (stage.enumerate(j) for j in range(seeds_per_stage)) if x is not None]
    if 2 * len(seeds) + 4 > fragment_cap:
        raise FragmentTooLarge(f"{len(seeds)} seeds exceed the fragment cap {fragment_cap}")
    left = [lhs.iota(lim.phi(i, x)) for i, x in seeds]
    right = [rhs.phi(i, completion_of(system.stage(i)).iota(x)) for i, x in seeds]
    for probe in lim.probe_chains():
        left.append(sup_chain(lhs, probe.chain.map(lhs.iota, limit=probe.chain.limit), budget).value)
    unbounded = lim.unbounded_chain()
    if unbounded is not None:
        left.append(sup_chain(lhs, unbounded.map(lhs.iota, limit=unbounded.limit), budget).value)
    for family in (rhs.system.probe, rhs.system.unbounded):
        if family is not None:
            right.append(rhs.from_family(family))
    report.notes.append(f"fragment: {len(left)} classes on the left, {len(right)} on the right")

    # 2. gamma on the fragment
    images = [gamma(a) for a in left]
    bad = None
    for (a, ga) in zip(left, images):
        for (b, gb) in zip(left, images):
            if lhs.leq(a, b) != rhs.leq(ga, gb):
                bad = [lhs.key(a), lhs.key(b)]
                break
        if bad:
            break
    report.add("gamma order-embedding", Status.FAIL if bad else Status.PASS, bad)

    missing = [rhs.key(r) for r in right if not any(rhs.eq(r, g) for g in images)]
    report.add("fragments agree", Status.FAIL if missing else Status.PASS, missing or None)

    # 3. sup-density: each right class is the sup of gamma-images of stage elements
    status, witness = Status.PASS, None
    for r in right:
        rep = rapid_representative(r.payload, budget)
        start = system.start

        def base_term(n: int, rep=rep) -> Element:
            approx = completion_of(system.stage(n)).approximant(rep.term(n), n - start)
            return approx.payload.top

        chain = Chain.lazy(lambda n, bt=base_term: gamma(lhs.iota(lim.phi(start + n, bt(start + n)))),
                           limit=rep.limit, label=f"gamma-images({rep.label})")
        if rep.eventual_stage is not None:
            e = rep.eventual_stage
            chain = Chain.stationary(gamma(lhs.iota(lim.phi(e, base_term(e)))), limit=rep.limit)
        sup = sup_chain(rhs, chain, budget)
        if sup.status == SupStatus.UNKNOWN:
            status = Status.UNKNOWN
        elif not (sup.found and rhs.eq(sup.value, r)):
            status, witness = Status.FAIL, rhs.key(r)
            break
    report.add("image sup-dense", status, witness)
    report.notes.append("left: " + ", ".join(lhs.key(a) for a in left))
    report.notes.append("right: " + ", ".join(rhs.key(r) for r in right))
    report.budget_spent = budget
    return report


# ==========================================
# Counterexample suite: no inductive limits in PreCu
# ==========================================

def dyadic_phi(lim: InductiveLimit, value) -> Element:
    """φ(r) for a dyadic r, through its first stage."""
    value = Fraction(value)
    i = max(dyadic_level(value), lim.system.start)
    return lim.phi(i, lim.system.stage(i).from_value(value))


def doubled_chains(count: int = 50) -> List[tuple]:
    """(r, offset, primed) for chains r(1 - 2^-(n+offset)) of T1/T2 with dyadic limits r."""
    out = []
    for j in range(count):
        r = Fraction(1 + j % 5, 2 ** (j // 10))
        offset = 1 + j % 3
        primed = j % 2 == 1
        out.append((r, offset, primed))
    return out


def _doubled_chain(handle: Doubled, r: Fraction, offset: int, primed: bool) -> Chain:
    suffix = "'" if primed else ""
    return Chain.lazy(lambda n: handle.from_value(ramp(r, n, offset), primed), limit=r,
                      label=f"{r}(1-2^-(n+{offset})){suffix}")


def prime_collapse_to_limit(lim: InductiveLimit) -> MapDescriptor:
    """γ: T2 -> lim_C(dyadic), a ↦ φ(a), a' ↦ φ(a)."""
    T2 = family_handle("T2")
    return MapDescriptor(
        name="gamma_T2->lim",
        dom=T2,
        cod=lim,
        fn=lambda x: dyadic_phi(lim, T2.base(x)),
        limit_map=lambda v: v,
    )


def counterexample_suite(budget: Optional[int] = None, chain_count: int = 50) -> EvidenceReport:
    budget = resolve_budget(budget)
    T1, T2 = family_handle("T1"), family_handle("T2")
    lim = limit_in_C(dyadic_system(), budget)
    report = EvidenceReport(subject="no inductive limits in PreCu (dyadic system)")

    # (a) suprema in T1 and T2
    bad = []
    for r, offset, primed in doubled_chains(chain_count):
        s1 = sup_chain(T1, _doubled_chain(T1, r, offset, primed), budget)
        s2 = sup_chain(T2, _doubled_chain(T2, r, offset, primed), budget)
        if not (s1.found and s1.value == T1.from_value(r, True)):
            bad.append(f"T1 {r}")
        if s2.status != SupStatus.NO_SUP:
            bad.append(f"T2 {r}")
    for r in (Fraction(1), Fraction(3, 4)):
        a, a1 = T2.from_value(r), T2.from_value(r, True)
        if T2.leq(a, a1) or T2.leq(a1, a):
            bad.append(f"T2 compares {r} and {r}'")
        if not (T1.leq(T1.from_value(r, True), T1.from_value(r)) and not T1.leq(T1.from_value(r), T1.from_value(r, True))):
            bad.append(f"T1 does not order {r}' < {r}")
    report.add("(a) doubled-monoid suprema", Status.FAIL if bad else Status.PASS, bad or None,
               f"{chain_count} non-stationary bounded chains: T1 sup r', T2 none")

    # (b) the prime collapse T2 -> lim_C is a PreCu morphism
    gamma = prime_collapse_to_limit(lim)
    morphism = is_precu_morphism(gamma, T2, lim, T2.sample(8), budget)
    report.add("(b) prime collapse is a PreCu morphism", morphism.status,
               None if morphism.passed else morphism.failures[0].property)
    stationary_bad = None
    for x in T2.sample(8):
        image = sup_chain(lim, gamma.map_chain(Chain.stationary(x, limit=T2.base(x))), budget)
        if not (image.found and lim.eq(image.value, gamma(x))):
            stationary_bad = T2.format(x)
            break
    report.add("(b) stationary suprema preserved", Status.FAIL if stationary_bad else Status.PASS, stationary_bad)

    # (c) the class t' of (1 - 2^-n) sits strictly below φ(1) and above every φ(1 - 2^-k)
    t_prime = lim.from_family(lim.system.probe)
    one = dyadic_phi(lim, 1)
    below = [k for k in range(budget + 1) if not lim.leq(dyadic_phi(lim, ramp(1, k)), t_prime)]
    report.add("(c) phi(1 - 2^-k) <= t' for k <= N", Status.FAIL if below else Status.PASS, below or None,
               f"N = {budget}")
    strictly = lim.leq(t_prime, one) and not lim.leq(one, t_prime)
    report.add("(c) t' < phi(1)", Status.PASS if strictly else Status.FAIL,
               {"t'": lim.key(t_prime), "phi(1)": lim.key(one)})
    searched = seq_precsim(one.payload, t_prime.payload, budget, closed_form=False)
    report.notes.append(f"phi(1) <= t' by search: {searched.verdict.value} after {searched.budget_spent} steps")

    # (d) stage images are compact
    not_compact = []
    for i in range(lim.system.start, lim.system.start + 4):
        stage = lim.system.stage(i)
        for j in range(4):
            x = lim.phi(i, stage.enumerate(j))
            v = way_below(lim, x, x, budget)
            if not v.is_true:
                not_compact.append(lim.key(x))
    v = way_below(lim, one, one, budget)
    report.add("(d) phi(1) compact", status_of(v), render(v.witness, lim) if not v.is_true else None)
    report.add("(d) stage images compact", Status.FAIL if not_compact else Status.PASS, not_compact or None)
    report.budget_spent = budget
    return report

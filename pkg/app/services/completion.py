"""
The completion M̄ of a PreCu monoid M as countably generated intervals of M
modulo mutual ≼, with the embedding ι(x) = [0, x], way-below and suprema in
M̄, the universal extension β and the functorial lift σ̄.

Intervals are never materialised as sets. An interval is generator data:
a single element, a finite directed set, or a lazy increasing chain.
"""
import logging
import threading
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Any, Callable, List, Optional, Sequence, Union

from app.services.core_order import (
    BoundedChain,
    Chain,
    ChainWitness,
    Element,
    MapDescriptor,
    MonoidClass,
    MonoidHandle,
    Preimage,
    SupStatus,
    SupVerdict,
    Trivalent,
    add_chains,
    check_monotone,
    check_rapid,
    resolve_budget,
    sup_chain,
    way_below,
)
from app.services.cuts import INF, BoxCut, Cut, compare_limits, is_exact
from app.services.errors import (
    BudgetExhausted,
    MixedFamily,
    NoApproximant,
    NotIncreasing,
    NotMonotone,
    SupFailed,
)

logger = logging.getLogger(__name__)


class IntervalForm(str, Enum):
    PRINCIPAL = "principal"
    FINITE = "finite"
    CHAIN = "chain"


@dataclass(frozen=True)
class IntervalDesc:
    owner: MonoidHandle
    form: IntervalForm
    gens: tuple = ()
    chain: Optional[Chain] = None
    bound: Optional[Element] = None

    @classmethod
    def principal(cls, owner: MonoidHandle, x: Element) -> "IntervalDesc":
        owner.check(x)
        return cls(owner, IntervalForm.PRINCIPAL, gens=(x,))

    @classmethod
    def finite_generated(cls, owner: MonoidHandle, gens: Sequence[Element]) -> "IntervalDesc":
        gens = tuple(dict.fromkeys(gens))
        if not gens:
            raise ValueError("an interval needs at least one generator")
        owner.check(*gens)
        for a in gens:
            for b in gens:
                if not any(owner.leq(a, c) and owner.leq(b, c) for c in gens):
                    raise ValueError(
                        f"generators {owner.format(a)} and {owner.format(b)} have no upper bound in the list"
                    )
        return cls(owner, IntervalForm.FINITE, gens=gens)

    @classmethod
    def chain_generated(cls, owner: MonoidHandle, chain: Chain, bound: Optional[Element] = None,
                        budget: Optional[int] = None) -> "IntervalDesc":
        budget = resolve_budget(budget)
        prefix = check_monotone(owner, chain, budget)
        if bound is not None and any(not owner.leq(x, bound) for x in prefix):
            raise ValueError(f"{chain.label} exceeds its declared bound")
        return cls(owner, IntervalForm.CHAIN, chain=chain, bound=bound)

    @property
    def top(self) -> Optional[Element]:
        """Greatest generator, when the interval has one."""
        if self.form == IntervalForm.PRINCIPAL:
            return self.gens[0]
        if self.form == IntervalForm.FINITE:
            return next(g for g in self.gens if all(self.owner.leq(h, g) for h in self.gens))
        if not self.chain.is_lazy:
            return self.chain.eventual
        return None

    def generators(self, budget: int) -> List[Element]:
        if self.form == IntervalForm.CHAIN:
            return self.chain.prefix(self.chain.explore_length(budget))
        return list(self.gens)

    def as_chain(self) -> Chain:
        top = self.top
        if top is not None and self.form != IntervalForm.CHAIN:
            return Chain.stationary(top, limit=self.owner.value_limit(top), label=f"const {self.owner.format(top)}")
        return self.chain

    def describe(self) -> str:
        fmt = self.owner.format
        if self.form == IntervalForm.PRINCIPAL:
            return f"[0,{fmt(self.gens[0])}]"
        if self.form == IntervalForm.FINITE:
            return "gen{" + ",".join(fmt(g) for g in self.gens) + "}"
        return f"gen({self.chain.label})"


def _same_owner(I: IntervalDesc, J: IntervalDesc) -> None:
    if I.owner.family_id != J.owner.family_id:
        raise MixedFamily(f"intervals of {I.owner.family_id} and {J.owner.family_id}")


# ==========================================
# Way-below content
# ==========================================

def interval_cut(I: IntervalDesc, budget: int):
    """Way-below content of I as a cut, when the owner family describes it in closed form."""
    top = I.top
    if top is not None:
        return I.owner.principal_cut(top)
    return I.owner.chain_cut(I.chain, budget)


def class_key(I: IntervalDesc, budget: Optional[int] = None) -> str:
    budget = resolve_budget(budget)
    cut = interval_cut(I, budget)
    return cut.key() if cut is not None else I.describe()


# ==========================================
# ≼ and addition
# ==========================================

def interval_precsim(I: IntervalDesc, J: IntervalDesc, budget: Optional[int] = None) -> Trivalent:
    """
    I ≼ J: every z ≪ x for a generator x of I is way below some generator of J.
    Decided through cuts where the owner provides them, else by a budgeted
    search whose True means "verified on the explored prefix".
    """
    budget = resolve_budget(budget)
    _same_owner(I, J)
    ci, cj = interval_cut(I, budget), interval_cut(J, budget)
    if ci is not None and cj is not None and type(ci) is type(cj):
        verdict = ci.le(cj, budget)
        if verdict is None:
            logger.debug("precsim: cuts %s, %s not separated at budget %d", ci.key(), cj.key(), budget)
            return Trivalent.unknown(budget, reason="limits not separated within budget")
        witness = {"left": ci.key(), "right": cj.key()}
        return Trivalent.of(verdict, 1, witness, "way-below content")
    return _precsim_search(I, J, budget)


def _approximants(owner: MonoidHandle, x: Element, budget: int) -> List[Element]:
    if owner.all_compact or owner.is_finite:
        return [x]
    chain = owner.approximant_chain(x)
    if chain is None:
        raise NoApproximant(f"{owner.family_id}: no approximant for {owner.format(x)}")
    return chain.prefix(chain.explore_length(min(budget, 16)))


def _precsim_search(I: IntervalDesc, J: IntervalDesc, budget: int) -> Trivalent:
    owner = I.owner
    targets = J.generators(budget)
    exhaustive = J.form != IntervalForm.CHAIN or not J.chain.is_lazy
    spent = 0
    for x in I.generators(budget):
        for z in _approximants(owner, x, budget):
            verdicts = []
            for y in targets:
                spent += 1
                v = way_below(owner, z, y, budget)
                if v.is_true:
                    break
                verdicts.append(v)
            else:
                if exhaustive and all(v.is_false for v in verdicts):
                    return Trivalent.false(spent, witness=z, reason="approximant below no generator")
                return Trivalent.unknown(spent, witness=z, reason="search budget exhausted")
    reason = "verified on explored prefix" if I.form == IntervalForm.CHAIN else "all generators covered"
    return Trivalent.true(spent, reason=reason)


def interval_add(I: IntervalDesc, J: IntervalDesc) -> IntervalDesc:
    _same_owner(I, J)
    owner = I.owner
    if I.form == IntervalForm.PRINCIPAL and J.form == IntervalForm.PRINCIPAL:
        return IntervalDesc.principal(owner, owner.add(I.gens[0], J.gens[0]))
    if I.form != IntervalForm.CHAIN and J.form != IntervalForm.CHAIN:
        return IntervalDesc.finite_generated(owner, [owner.add(a, b) for a in I.gens for b in J.gens])
    chain = add_chains(owner, I.as_chain(), J.as_chain())
    bound = owner.add(I.bound, J.bound) if I.bound is not None and J.bound is not None else None
    return IntervalDesc(owner, IntervalForm.CHAIN, chain=chain, bound=bound)


# ==========================================
# Rapid representatives and suprema
# ==========================================

def rapidify(I: IntervalDesc, budget: Optional[int] = None) -> IntervalDesc:
    """An equivalent chain-generated interval whose chain is rapidly increasing."""
    budget = resolve_budget(budget)
    owner = I.owner
    top = I.top
    if top is None and (owner.all_compact or owner.is_finite):
        sup = sup_chain(owner, I.chain, budget)
        if sup.found:
            # a compact supremum is attained by the chain
            top = sup.value

    if top is not None:
        chain = owner.approximant_chain(top)
        if chain is None:
            if not owner.is_finite:
                raise NoApproximant(f"{owner.family_id}: no approximant for {owner.format(top)}")
            chain = Chain.stationary(top, limit=owner.value_limit(top))
        return IntervalDesc(owner, IntervalForm.CHAIN, chain=_mark_rapid(chain), bound=top)

    source = I.chain
    if owner.approximant_chain(owner.zero) is None and not owner.is_finite:
        raise NoApproximant(f"{owner.family_id} provides no approximants")
    diagonal = Chain.lazy(
        lambda n: owner.approximant(source.term(n), n),
        limit=source.limit,
        label=f"rapid({source.label})",
    )
    try:
        check_monotone(owner, diagonal, budget)
    except NotMonotone as e:
        raise NotMonotone(f"diagonal of {source.label} is not increasing: {e.message}")
    rapid = check_rapid(owner, diagonal, min(budget, 16))
    if rapid.is_false:
        raise NotMonotone(f"diagonal of {source.label} is not rapidly increasing at {rapid.witness}")
    return IntervalDesc(owner, IntervalForm.CHAIN, chain=_mark_rapid(diagonal), bound=I.bound)


def _mark_rapid(chain: Chain) -> Chain:
    return Chain(
        term_fn=chain.term_fn,
        kind=chain.kind,
        rapid=True,
        limit=chain.limit,
        stationary_from=chain.stationary_from,
        label=chain.label,
    )


@dataclass(frozen=True, eq=False)
class IntervalSeq:
    """A (possibly infinite) increasing sequence of intervals of one owner."""

    term_fn: Callable[[int], IntervalDesc]
    length: Optional[int] = None
    # declared limit of the base values of the merged generators
    limit: Any = None
    label: str = ""

    @classmethod
    def of(cls, items: Sequence[IntervalDesc], label: str = "") -> "IntervalSeq":
        items = tuple(items)
        if not items:
            raise ValueError("empty interval sequence")
        return cls(lambda k: items[k], len(items), label=label or "finite")

    def explore_length(self, budget: int) -> int:
        return budget if self.length is None else min(self.length, budget)

    def term(self, k: int) -> IntervalDesc:
        return self.term_fn(k)


def cantor_pair(t: int):
    """Row-by-row Cantor order: 0 -> (0,0), 1 -> (0,1), 2 -> (1,0), 3 -> (0,2), ..."""
    d = 0
    while (d + 1) * (d + 2) // 2 <= t:
        d += 1
    j = t - d * (d + 1) // 2
    return j, d - j


def interval_sup(seq: Union[IntervalSeq, Sequence[IntervalDesc]], budget: Optional[int] = None) -> IntervalDesc:
    budget = resolve_budget(budget)
    if not isinstance(seq, IntervalSeq):
        seq = IntervalSeq.of(seq)
    length = seq.explore_length(budget)
    rows = [seq.term(k) for k in range(length)]
    owner = rows[0].owner
    for a, b in zip(rows, rows[1:]):
        _same_owner(a, b)
        if interval_precsim(a, b, budget).is_false:
            raise NotIncreasing(f"{a.describe()} is not below {b.describe()}")

    # 1. a finite sequence of intervals with greatest generators: the last one
    if seq.length is not None:
        last = rows[-1]
        if all(r.top is not None for r in rows) and all(owner.leq(r.top, last.top) for r in rows):
            return IntervalDesc.principal(owner, last.top)

    # 2. merge the rapidified cofinal chains in Cantor order
    chains = {}

    def row(k: int) -> Chain:
        if k not in chains:
            chains[k] = rapidify(seq.term(k), budget).chain
        return chains[k]

    lock = threading.Lock()
    merged: List[Element] = []

    def term(t: int) -> Element:
        with lock:
            while len(merged) <= t:
                merged.append(_merge_step(owner, merged, row, len(merged), seq.length, budget))
            return merged[t]

    limit = seq.limit
    if limit is None and seq.length is not None:
        limit = rows[-1].as_chain().limit
    chain = Chain.lazy(term, limit=limit, label=f"sup({seq.label})")
    return IntervalDesc(owner, IntervalForm.CHAIN, chain=chain)


def _merge_step(owner: MonoidHandle, merged: List[Element], row: Callable[[int], Chain], t: int,
                length: Optional[int], budget: int) -> Element:
    k, j = cantor_pair(t)
    if length is not None:
        k = min(k, length - 1)
    g = row(k).term(j)
    if not merged:
        return g
    prev = merged[-1]
    if owner.leq(prev, g):
        return g
    if owner.leq(g, prev):
        return prev
    # later terms of the largest row seen so far are upper bounds eventually
    top_row = max(cantor_pair(s)[0] for s in range(t + 1))
    if length is not None:
        top_row = min(top_row, length - 1)
    for i in range(budget):
        candidate = row(top_row).term(j + i)
        if owner.leq(prev, candidate) and owner.leq(g, candidate):
            return candidate
    raise BudgetExhausted(f"no upper bound of merged generators found within {budget} terms")


# ==========================================
# The completion monoid
# ==========================================

CompletionElement = Element


class CompletionMonoid(MonoidHandle):
    """M̄ exposed through the monoid contract; payloads are IntervalDesc representatives."""

    def __init__(self, base: MonoidHandle, budget: Optional[int] = None):
        self.base = base
        self.budget = resolve_budget(budget)
        super().__init__(f"{base.family_id}-bar", MonoidClass.CU, all_compact=base.is_finite)

    def zero_payload(self):
        return IntervalDesc.principal(self.base, self.base.zero)

    def canonical(self, payload):
        if isinstance(payload, Element):
            return IntervalDesc.principal(self.base, payload)
        if not isinstance(payload, IntervalDesc) or payload.owner.family_id != self.base.family_id:
            raise ValueError(f"{payload} is not an interval of {self.base.family_id}")
        return payload

    def rep(self, x: Element) -> IntervalDesc:
        return x.payload

    def format(self, x):
        return x.payload.describe()

    def key(self, x: Element) -> str:
        return class_key(x.payload, self.budget)

    def iota(self, x: Element) -> Element:
        return Element(self.family_id, IntervalDesc.principal(self.base, x))

    def add(self, x, y):
        return Element(self.family_id, interval_add(x.payload, y.payload))

    def precsim(self, x, y, budget: Optional[int] = None) -> Trivalent:
        return interval_precsim(x.payload, y.payload, budget or self.budget)

    def leq(self, x, y):
        return self.precsim(x, y).as_bool()

    def identical(self, x, y):
        return self.eq(x, y)

    def way_below_verdict(self, x, y, budget):
        return completion_way_below(self, x, y, budget)

    def sup_rule(self, chain, budget):
        seq = IntervalSeq(
            term_fn=lambda k: chain.term(k).payload,
            length=None if chain.is_lazy else chain.stationary_from + 1,
            limit=chain.limit,
            label=chain.label,
        )
        try:
            result = interval_sup(seq, budget)
        except BudgetExhausted as e:
            return SupVerdict.unknown(reason=e.message)
        return SupVerdict.sup(Element(self.family_id, result), reason="merged cofinal chains")

    def approximant_chain(self, x):
        rap = rapidify(x.payload, self.budget)
        chain = rap.chain
        if not chain.is_lazy:
            return Chain.stationary(self.iota(chain.eventual), label=f"iota({chain.label})", limit=chain.limit)
        return Chain.lazy(lambda n: self.iota(chain.term(n)), limit=chain.limit, rapid=True,
                          label=f"iota({chain.label})")

    @property
    def is_finite(self):
        return self.base.is_finite

    def elements(self):
        # directed finite sets have a greatest element, so every class is principal
        return [self.iota(x) for x in self.base.elements()]

    def extra_classes(self) -> List[Element]:
        """Non-principal classes generated by the base family's probe chains."""
        out = []
        chains = [p.chain for p in self.base.probe_chains()]
        unbounded = self.base.unbounded_chain()
        if unbounded is not None:
            chains.append(unbounded)
        for chain in chains:
            out.append(Element(self.family_id, IntervalDesc(self.base, IntervalForm.CHAIN, chain=chain)))
        return out

    def enumerate(self, index):
        extras = self.extra_classes()
        if index % 2 == 1 and index // 2 < len(extras):
            return extras[index // 2]
        x = self.base.enumerate(index // 2 if index % 2 == 0 else index)
        return None if x is None else self.iota(x)

    def probe_chains(self):
        return [
            BoundedChain(self._iota_chain(p.chain), self.iota(p.bound))
            for p in self.base.probe_chains()
        ]

    def unbounded_chain(self):
        chain = self.base.unbounded_chain()
        return None if chain is None else self._iota_chain(chain)

    def _iota_chain(self, chain: Chain) -> Chain:
        return chain.map(self.iota, limit=chain.limit, label=f"iota({chain.label})")

    def principal_cut(self, x):
        return interval_cut(x.payload, self.budget)


@lru_cache(maxsize=None)
def completion_of(base: MonoidHandle) -> CompletionMonoid:
    return CompletionMonoid(base)


def iota(handle: MonoidHandle, x: Element) -> CompletionElement:
    handle.check(x)
    return completion_of(handle).iota(x)


def iota_map(handle: MonoidHandle) -> MapDescriptor:
    bar = completion_of(handle)
    return MapDescriptor(
        name=f"iota_{handle.family_id}",
        dom=handle,
        cod=bar,
        fn=bar.iota,
        limit_map=lambda v: v,
        preimage=lambda x, budget: iota_preimage(bar, x, budget),
    )


def iota_preimage(bar: CompletionMonoid, x: Element, budget: int) -> Preimage:
    """ι(z) = [I] forces z to be the supremum of a chain generating I."""
    I = x.payload
    if I.top is not None:
        return Preimage(element=I.top)
    sup = sup_chain(bar.base, I.chain, budget)
    if sup.status == SupStatus.NO_SUP:
        return Preimage(refutation=ChainWitness(I.chain, min(budget, 6)))
    if not sup.found:
        return Preimage()
    candidate = bar.iota(sup.value)
    there = bar.precsim(candidate, x, budget)
    back = bar.precsim(x, candidate, budget)
    if there.is_true and back.is_true:
        return Preimage(element=sup.value)
    if there.is_false or back.is_false:
        return Preimage(refutation=f"class differs from iota({bar.base.format(sup.value)})")
    return Preimage()


# ==========================================
# Operations on completion elements
# ==========================================

def completion_leq(x: Element, y: Element, budget: Optional[int] = None) -> Trivalent:
    return interval_precsim(x.payload, y.payload, budget)


def completion_add(x: Element, y: Element) -> Element:
    if x.family_id != y.family_id:
        raise MixedFamily(f"{x.family_id} vs {y.family_id}")
    return Element(x.family_id, interval_add(x.payload, y.payload))


def completion_sup(chain: Chain, budget: Optional[int] = None) -> Element:
    first = chain.term(0)
    bar = completion_of(first.payload.owner)
    verdict = sup_chain(bar, chain, budget)
    if not verdict.found:
        raise SupFailed(verdict.reason or "supremum not produced within budget")
    return verdict.value


def completion_way_below(bar: CompletionMonoid, x: Element, y: Element,
                         budget: Optional[int] = None) -> Trivalent:
    """
    [I] ≪ [J] iff [I] ≤ ι(y_j) for some term of a rapid chain (y_j) generating J.
    """
    budget = resolve_budget(budget)
    bar.check(x, y)
    I = x.payload
    rap = rapidify(y.payload, budget)
    chain = rap.chain
    witness_chain = ChainWitness(
        chain.map(bar.iota, limit=chain.limit, label=f"iota({chain.label})"),
        chain.explore_length(budget),
    )

    spent = 0
    for j in range(chain.explore_length(budget)):
        spent += 1
        v = interval_precsim(I, IntervalDesc.principal(bar.base, chain.term(j)), budget)
        if v.is_true:
            return Trivalent.true(spent, witness=bar.iota(chain.term(j)), reason=f"below iota of term {j}")

    if not chain.is_lazy:
        return Trivalent.false(spent, witness=witness_chain, reason="below no term of a stationary chain")
    whole = interval_precsim(I, y.payload, budget)
    if whole.is_false:
        return Trivalent.false(spent, witness=witness_chain, reason="[I] is not below [J]")

    cut = interval_cut(I, budget)
    if isinstance(cut, Cut) and chain.limit is not None and not isinstance(chain.limit, tuple):
        if compare_limits(cut.value, chain.limit, budget) in (0, 1):
            return Trivalent.false(spent, witness=witness_chain, reason="content reaches the limit of the chain")
    if isinstance(cut, BoxCut) and not cut.closed:
        return Trivalent.false(spent, witness=witness_chain, reason="unbounded content")
    return Trivalent.unknown(spent, witness=witness_chain, reason="budget exhausted")


# ==========================================
# Universal property and functoriality
# ==========================================

def extend_universal(alpha: MapDescriptor, P: MonoidHandle, x: Element,
                     budget: Optional[int] = None) -> Element:
    """β([I]) = sup_P α(y_n) over a rapid chain (y_n) generating I."""
    budget = resolve_budget(budget)
    rap = rapidify(x.payload, budget)
    image = alpha.map_chain(rap.chain)
    verdict = sup_chain(P, image, budget)
    if not verdict.found:
        raise SupFailed(f"{P.family_id}: no supremum for {image.label} ({verdict.status.value})")
    return verdict.value


def extension_map(alpha: MapDescriptor, P: MonoidHandle, budget: Optional[int] = None) -> MapDescriptor:
    bar = completion_of(alpha.dom)
    return MapDescriptor(
        name=f"beta_{alpha.name}",
        dom=bar,
        cod=P,
        fn=lambda x: extend_universal(alpha, P, x, budget),
        limit_map=alpha.limit_map,
    )


def lift_morphism(sigma: MapDescriptor, budget: Optional[int] = None) -> MapDescriptor:
    """σ̄: M̄ → N̄, [I] ↦ class of the interval generated by σ of a rapid chain of I."""
    budget = resolve_budget(budget)
    dom_bar, cod_bar = completion_of(sigma.dom), completion_of(sigma.cod)

    def lifted(x: Element) -> Element:
        I = x.payload
        if I.top is not None and I.form != IntervalForm.CHAIN:
            return cod_bar.iota(sigma(I.top))
        chain = rapidify(I, budget).chain
        if not chain.is_lazy:
            return cod_bar.iota(sigma(chain.eventual))
        image = sigma.map_chain(chain)
        return Element(cod_bar.family_id, IntervalDesc(sigma.cod, IntervalForm.CHAIN, chain=image))

    return MapDescriptor(
        name=f"{sigma.name}-bar",
        dom=dom_bar,
        cod=cod_bar,
        fn=lifted,
        limit_map=sigma.limit_map,
    )

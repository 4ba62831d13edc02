"""
Catalog of concrete monoid families with closed-form rules for ≤, ≪ and
suprema of chains: ℕ, ℕ∪{∞}, the dyadic stages S_i and their union S, ℚ⁺,
the doubled monoids T₁ / T₂, chain monoids Tₙ / T_ω, and ℕ^d.

Family ids double as the names used in spec files:

    N  N_inf  S  S_3  Q+  T1  T2  T_4  T_omega  T_omega_inf  N^2
"""
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Any, Callable, List, Optional

from app.services.core_order import (
    BoundedChain,
    Chain,
    ChainWitness,
    Element,
    MapDescriptor,
    MonoidClass,
    MonoidHandle,
    Preimage,
    SupVerdict,
    check_monotone,
    identity_map,
    resolve_budget,
)
from app.services.cuts import INF, BoxCut, Cut, IrrationalLimit, compare_limits, is_exact
from app.services.errors import UnknownFamily

logger = logging.getLogger(__name__)

CLOSED = frozenset({""})
OPEN = frozenset()


def is_dyadic(value) -> bool:
    if not is_exact(value) or value == INF:
        return False
    d = Fraction(value).denominator
    return d & (d - 1) == 0


def dyadic_level(value: Fraction) -> int:
    """Smallest i with value ∈ S_i."""
    return Fraction(value).denominator.bit_length() - 1


def dyadic_at(index: int) -> Fraction:
    """Deterministic enumeration of S (with repetitions)."""
    if index == 0:
        return Fraction(0)
    n, level = divmod(index - 1, 3)
    return Fraction(n + 1, 2 ** level)


def calkin_wilf(index: int) -> Fraction:
    """index-th positive rational of the Calkin-Wilf sequence (each appears once)."""
    q = Fraction(1)
    for _ in range(index):
        q = 1 / (2 * (q.numerator // q.denominator) - q + 1)
    return q


def ramp(r, n: int, offset: int = 0) -> Fraction:
    return Fraction(r) * (1 - Fraction(1, 2 ** (n + offset)))


def sqrt2_truncation(n: int) -> Fraction:
    return Fraction(isqrt(2 * 4 ** n), 2 ** n)


SQRT2 = IrrationalLimit(lower=sqrt2_truncation, upper=Fraction(3, 2), label="sqrt2")


# ==========================================
# Linearly based families
# ==========================================

class LinearFamily(MonoidHandle):
    """
    Families whose elements sit over a linearly ordered base value, possibly
    with a tag ("" or "'" for the doubled copies). `dense` families have
    non-compact nonzero elements; discrete ones are all-compact.
    """

    dense = False

    def base(self, x: Element):
        return x.payload

    def tag(self, x: Element) -> str:
        return ""

    def value_limit(self, x: Element):
        return self.base(x)

    def from_value(self, value) -> Element:
        return self.element(value)

    def contains_value(self, value) -> bool:
        try:
            self.canonical(value)
            return True
        except (ValueError, TypeError):
            return False

    # --- cuts ---
    def principal_cut(self, x: Element):
        value = self.base(x)
        if value == INF:
            return Cut(INF, OPEN)
        if self.dense and value != 0:
            return Cut(value, OPEN)
        return Cut(value, CLOSED)

    def limit_cut(self, value):
        if value == INF or self.dense:
            return Cut(value, OPEN)
        return Cut(value, CLOSED)

    def chain_cut(self, chain: Chain, budget: int):
        if not chain.is_lazy:
            return self.principal_cut(chain.eventual)
        if chain.limit is None:
            return None
        prefix = chain.prefix(chain.explore_length(budget))
        if any(compare_limits(self.base(x), chain.limit, budget) == 0 for x in prefix):
            return self.principal_cut(prefix[-1])
        return self.limit_cut(chain.limit)

    # --- suprema ---
    def _limit_respected(self, chain: Chain, budget: int) -> bool:
        for x in chain.prefix(chain.explore_length(budget)):
            if compare_limits(self.base(x), chain.limit, budget) == 1:
                logger.warning("%s: %s exceeds its declared limit", self.family_id, chain.label)
                return False
        return True

    def top_sup(self, chain: Chain, budget: int) -> SupVerdict:
        return SupVerdict.no_sup(ChainWitness(chain, budget), reason="unbounded chain")

    def limit_sup(self, chain: Chain, budget: int) -> Optional[SupVerdict]:
        value = chain.limit
        if self.contains_value(value):
            return SupVerdict.sup(self.from_value(value), reason="declared limit")
        if not self.dense:
            return SupVerdict.unknown(reason="declared limit outside a discrete carrier")
        return SupVerdict.no_sup(ChainWitness(chain, budget), reason="limit not in carrier")

    def sup_rule(self, chain: Chain, budget: int) -> Optional[SupVerdict]:
        if chain.limit is None:
            return None
        if not self._limit_respected(chain, budget):
            return SupVerdict.unknown(reason="declared limit violated on prefix")
        if chain.limit == INF:
            return self.top_sup(chain, budget)
        return self.limit_sup(chain, budget)

    def approximant_chain(self, x: Element) -> Optional[Chain]:
        value = self.base(x)
        if value == INF:
            return Chain.lazy(lambda n: self.from_value(n), limit=INF, rapid=True, label="n")
        if not self.dense or value == 0:
            return Chain.stationary(x, label=f"const {self.format(x)}", limit=value)
        return Chain.lazy(
            lambda n: self.from_value(ramp(value, n)),
            limit=value,
            rapid=True,
            label=f"{self.format(x)}(1-2^-n)",
        )

    def format(self, x: Element) -> str:
        value = self.base(x)
        return "∞" if value == INF else str(value)


def ramp_chain(handle: LinearFamily, r=1, offset: int = 0) -> Chain:
    """The chain r(1 - 2^-(n+offset))."""
    label = "1-2^-n" if r == 1 and offset == 0 else f"{r}(1-2^-(n+{offset}))"
    return Chain.lazy(lambda n: handle.from_value(ramp(r, n, offset)), limit=Fraction(r), label=label)


def sqrt2_chain(handle: LinearFamily) -> Chain:
    """Dyadic truncations of √2; bounded by 2, with no rational supremum."""
    return Chain.lazy(lambda n: handle.from_value(sqrt2_truncation(n)), limit=SQRT2, label="sqrt2 truncations")


def counting_chain(handle: LinearFamily, step=1) -> Chain:
    return Chain.lazy(lambda n: handle.from_value(Fraction(n) * step), limit=INF, label="n")


def capped_chain(handle: LinearFamily, cap, step=1) -> Chain:
    return Chain.lazy(
        lambda n: handle.from_value(min(Fraction(n) * step, Fraction(cap))),
        limit=Fraction(cap),
        label=f"min(n, {cap})",
    )


class Naturals(LinearFamily):
    def __init__(self):
        super().__init__("N", MonoidClass.C, all_compact=True)

    def zero_payload(self):
        return 0

    def canonical(self, payload):
        value = Fraction(payload)
        if value.denominator != 1 or value < 0:
            raise ValueError(f"{payload} is not a natural number")
        return int(value)

    def add(self, x, y):
        return Element(self.family_id, x.payload + y.payload)

    def leq(self, x, y):
        return x.payload <= y.payload

    def way_below_rule(self, x, y):
        return x.payload <= y.payload

    def enumerate(self, index):
        return Element(self.family_id, index)

    def probe_chains(self):
        return [BoundedChain(capped_chain(self, 3), self.element(3))]

    def unbounded_chain(self):
        return counting_chain(self)


class ExtendedNaturals(LinearFamily):
    """ℕ ∪ {∞}; ∞ is the only non-compact element."""

    def __init__(self):
        super().__init__("N_inf", MonoidClass.CU)

    def zero_payload(self):
        return 0

    def canonical(self, payload):
        if payload in (INF, "inf", "∞"):
            return INF
        value = Fraction(payload)
        if value.denominator != 1 or value < 0:
            raise ValueError(f"{payload} is not in N ∪ {{∞}}")
        return int(value)

    def add(self, x, y):
        return Element(self.family_id, x.payload + y.payload)

    def leq(self, x, y):
        return x.payload <= y.payload

    def way_below_rule(self, x, y):
        return x.payload != INF and x.payload <= y.payload

    def top_sup(self, chain, budget):
        return SupVerdict.sup(Element(self.family_id, INF), reason="unbounded chain")

    def enumerate(self, index):
        if index == 1:
            return Element(self.family_id, INF)
        return Element(self.family_id, max(index - 1, 0))

    def probe_chains(self):
        return [
            BoundedChain(capped_chain(self, 3), self.element(3)),
            BoundedChain(counting_chain(self), self.element(INF)),
        ]

    def unbounded_chain(self):
        return counting_chain(self)


class DyadicStage(LinearFamily):
    """S_i = (1/2^i)ℕ; discrete, so every element is compact."""

    def __init__(self, level: int):
        if level < 0:
            raise ValueError("level must be nonnegative")
        self.level = level
        super().__init__(f"S_{level}", MonoidClass.C, all_compact=True)

    def zero_payload(self):
        return Fraction(0)

    def canonical(self, payload):
        value = Fraction(payload)
        if value < 0 or (value * 2 ** self.level).denominator != 1:
            raise ValueError(f"{payload} is not in {self.family_id}")
        return value

    def numerator(self, x: Element) -> int:
        return int(x.payload * 2 ** self.level)

    def add(self, x, y):
        return Element(self.family_id, x.payload + y.payload)

    def leq(self, x, y):
        return x.payload <= y.payload

    def way_below_rule(self, x, y):
        return x.payload <= y.payload

    def enumerate(self, index):
        return Element(self.family_id, Fraction(index, 2 ** self.level))

    def probe_chains(self):
        step = Fraction(1, 2 ** self.level)
        return [BoundedChain(capped_chain(self, 1, step), self.element(1))]

    def unbounded_chain(self):
        return counting_chain(self, Fraction(1, 2 ** self.level))


class DenseRationalFamily(LinearFamily):
    """Shared rules of S and ℚ⁺: x ≪ y iff x < y or x = 0."""

    dense = True

    def zero_payload(self):
        return Fraction(0)

    def add(self, x, y):
        return Element(self.family_id, x.payload + y.payload)

    def leq(self, x, y):
        return x.payload <= y.payload

    def way_below_rule(self, x, y):
        return x.payload < y.payload or x.payload == 0

    def probe_chains(self):
        return [
            BoundedChain(ramp_chain(self), self.from_value(1)),
            BoundedChain(sqrt2_chain(self), self.from_value(2)),
        ]

    def unbounded_chain(self):
        return counting_chain(self)


class DyadicUnion(DenseRationalFamily):
    """S = ∪ S_i with its own (dense) order."""

    def __init__(self):
        super().__init__("S", MonoidClass.PRECU)

    def canonical(self, payload):
        value = Fraction(payload)
        if value < 0 or not is_dyadic(value):
            raise ValueError(f"{payload} is not a dyadic rational")
        return value

    def enumerate(self, index):
        return Element(self.family_id, dyadic_at(index))


class PositiveRationals(DenseRationalFamily):
    def __init__(self):
        super().__init__("Q+", MonoidClass.PRECU)

    def canonical(self, payload):
        value = Fraction(payload)
        if value < 0:
            raise ValueError(f"{payload} is negative")
        return value

    def enumerate(self, index):
        if index == 0:
            return self.zero
        return Element(self.family_id, calkin_wilf(index - 1))


# ==========================================
# Doubled monoids T1, T2
# ==========================================

def doubled_leq(variant: str, a: Fraction, a_primed: bool, b: Fraction, b_primed: bool) -> bool:
    if a_primed == b_primed:
        return a <= b
    if not a_primed:
        # a <= b' in both variants
        return a < b
    return a <= b if variant == "T1" else a < b


class Doubled(LinearFamily):
    """
    S ⊔ S' with primes absorbing under addition. T1 orders a' < a (linear),
    T2 leaves a and a' incomparable.
    """

    dense = True

    def __init__(self, variant: str):
        if variant not in ("T1", "T2"):
            raise UnknownFamily(variant)
        self.variant = variant
        super().__init__(variant, MonoidClass.PRECU)

    def zero_payload(self):
        return (Fraction(0), False)

    def canonical(self, payload):
        if isinstance(payload, Element):
            payload = payload.payload
        if isinstance(payload, str):
            primed = payload.endswith("'")
            payload = (payload.rstrip("'"), primed)
        if not isinstance(payload, tuple):
            payload = (payload, False)
        value, primed = Fraction(payload[0]), bool(payload[1])
        if value < 0 or not is_dyadic(value):
            raise ValueError(f"{payload} has no dyadic base")
        if primed and value == 0:
            raise ValueError("0' is not an element (S' = S without 0)")
        return (value, primed)

    def base(self, x):
        return x.payload[0]

    def tag(self, x):
        return "'" if x.payload[1] else ""

    def from_value(self, value, primed: bool = False):
        return Element(self.family_id, (Fraction(value), primed))

    def format(self, x):
        return f"{x.payload[0]}{self.tag(x)}"

    def add(self, x, y):
        (a, p), (b, q) = x.payload, y.payload
        return Element(self.family_id, (a + b, p or q))

    def leq(self, x, y):
        (a, p), (b, q) = x.payload, y.payload
        return doubled_leq(self.variant, a, p, b, q)

    def way_below_rule(self, x, y):
        if self.variant == "T2":
            return self.leq(x, y)
        # T1: x < y, or x = y unprimed
        if x == y:
            return not x.payload[1]
        return self.leq(x, y)

    def principal_cut(self, x):
        value, primed = x.payload
        if value == 0:
            return Cut(value, frozenset({"u"}))
        if self.variant == "T1":
            return Cut(value, OPEN) if primed else Cut(value, frozenset({"u", "p"}))
        return Cut(value, frozenset({"p" if primed else "u"}))

    def approximant_chain(self, x):
        value, primed = x.payload
        if self.variant == "T2" or not primed:
            return Chain.stationary(x, label=f"const {self.format(x)}", limit=value)
        return Chain.lazy(
            lambda n: self.from_value(ramp(value, n)),
            limit=value,
            rapid=True,
            label=f"{value}(1-2^-n)",
        )

    def sup_rule(self, chain, budget):
        return doubled_sup_rule(self.variant, chain, budget, handle=self)

    def enumerate(self, index):
        value = dyadic_at(index // 2)
        primed = index % 2 == 1
        if primed and value == 0:
            return None
        return self.from_value(value, primed)

    def probe_chains(self):
        return [
            BoundedChain(ramp_chain(self), self.from_value(1)),
            BoundedChain(sqrt2_chain(self), self.from_value(2)),
        ]

    def unbounded_chain(self):
        return counting_chain(self)


def doubled_sup_rule(variant: str, chain: Chain, budget: Optional[int] = None,
                     handle: Optional[Doubled] = None) -> SupVerdict:
    """
    Stationary chains have their eventual value. A non-stationary chain whose
    base limit r lies in S has sup r' in T1 and no sup in T2 (r and r' are
    incomparable upper bounds); without a base limit in S there is no sup.
    """
    handle = handle or family_handle(variant)
    budget = resolve_budget(budget)
    check_monotone(handle, chain, budget)
    if not chain.is_lazy:
        return SupVerdict.sup(chain.eventual, witness="stationary")
    if chain.limit is None:
        return SupVerdict.unknown(reason="no declared limit")
    if not handle._limit_respected(chain, budget):
        return SupVerdict.unknown(reason="declared limit violated on prefix")
    prefix = chain.prefix(chain.explore_length(budget))
    if any(compare_limits(handle.base(x), chain.limit, budget) == 0 for x in prefix):
        return SupVerdict.unknown(reason="chain reaches its limit; eventual value unknown")
    witness = ChainWitness(chain, len(prefix))
    if not is_dyadic(chain.limit):
        return SupVerdict.no_sup(witness, reason="base limit not in S")
    r = Fraction(chain.limit)
    if variant == "T1":
        return SupVerdict.sup(handle.from_value(r, True), witness=witness, reason="r' < r in T1")
    return SupVerdict.no_sup(
        {"chain": witness, "upper_bounds": [f"{r}", f"{r}'"]},
        reason=f"{r} and {r}' are incomparable minimal upper bounds",
    )


# ==========================================
# Chain monoids and powers of N
# ==========================================

class ChainMonoid(LinearFamily):
    """
    T_n = {a_0, ..., a_n} with a_i + a_j = a_max(i,j). `size=None` gives
    T_omega, and `top=True` adds a_inf.
    """

    def __init__(self, size: Optional[int] = None, top: bool = False):
        self.size = size
        self.top = top
        if size is not None:
            family_id, claimed = f"T_{size}", MonoidClass.CU
        elif top:
            family_id, claimed = "T_omega_inf", MonoidClass.CU
        else:
            family_id, claimed = "T_omega", MonoidClass.C
        super().__init__(family_id, claimed, all_compact=not top)

    def zero_payload(self):
        return 0

    def canonical(self, payload):
        if isinstance(payload, str) and payload.startswith("a"):
            payload = payload[1:].lstrip("_")
        if self.top and payload in (INF, "inf", "∞"):
            return INF
        value = Fraction(payload)
        if value.denominator != 1 or value < 0 or (self.size is not None and value > self.size):
            raise ValueError(f"{payload} is not an index of {self.family_id}")
        return int(value)

    def format(self, x):
        return "a_inf" if x.payload == INF else f"a{x.payload}"

    def add(self, x, y):
        return Element(self.family_id, max(x.payload, y.payload))

    def leq(self, x, y):
        return x.payload <= y.payload

    def way_below_rule(self, x, y):
        return x.payload != INF and x.payload <= y.payload

    @property
    def is_finite(self):
        return self.size is not None

    def elements(self):
        if self.size is None:
            return super().elements()
        return [Element(self.family_id, j) for j in range(self.size + 1)]

    def top_sup(self, chain, budget):
        if self.top:
            return SupVerdict.sup(Element(self.family_id, INF), reason="unbounded chain")
        return super().top_sup(chain, budget)

    def enumerate(self, index):
        if self.size is not None:
            return Element(self.family_id, index) if index <= self.size else None
        if self.top and index == 1:
            return Element(self.family_id, INF)
        return Element(self.family_id, max(index - 1, 0) if self.top else index)

    def probe_chains(self):
        if self.size is not None:
            return []
        return [BoundedChain(capped_chain(self, 2), self.element(2))]

    def unbounded_chain(self):
        return None if self.size is not None else counting_chain(self)


class NaturalsPower(MonoidHandle):
    """ℕ^d with coordinatewise order and addition; all-compact."""

    def __init__(self, dim: int):
        if dim < 1:
            raise ValueError("dimension must be positive")
        self.dim = dim
        super().__init__(f"N^{dim}", MonoidClass.C, all_compact=True)

    def zero_payload(self):
        return (0,) * self.dim

    def canonical(self, payload):
        values = tuple(int(Fraction(v)) for v in payload)
        if len(values) != self.dim or any(v < 0 or Fraction(v) != Fraction(w) for v, w in zip(values, payload)):
            raise ValueError(f"{payload} is not in {self.family_id}")
        return values

    def format(self, x):
        return "(" + ",".join(str(v) for v in x.payload) + ")"

    def add(self, x, y):
        return Element(self.family_id, tuple(a + b for a, b in zip(x.payload, y.payload)))

    def leq(self, x, y):
        return all(a <= b for a, b in zip(x.payload, y.payload))

    def way_below_rule(self, x, y):
        return self.leq(x, y)

    def approximant_chain(self, x):
        return Chain.stationary(x, label=f"const {self.format(x)}")

    def sup_rule(self, chain, budget):
        limit = chain.limit
        if not isinstance(limit, tuple):
            return None
        if any(v == INF for v in limit):
            return SupVerdict.no_sup(ChainWitness(chain, budget), reason="unbounded coordinate")
        return SupVerdict.sup(self.element(limit), reason="declared limit")

    def enumerate(self, index):
        coords = []
        for _ in range(self.dim):
            index, r = divmod(index, 4)
            coords.append(r)
        return Element(self.family_id, tuple(coords))

    def value_limit(self, x):
        return x.payload

    def principal_cut(self, x):
        return BoxCut(x.payload)

    def chain_cut(self, chain, budget):
        if not chain.is_lazy:
            return BoxCut(chain.eventual.payload)
        if isinstance(chain.limit, tuple):
            return BoxCut(chain.limit)
        return None

    def probe_chains(self):
        chain = Chain.lazy(
            lambda n: Element(self.family_id, (min(n, 2),) * self.dim),
            limit=(2,) * self.dim,
            label="min(n, 2)",
        )
        return [BoundedChain(chain, Element(self.family_id, (2,) * self.dim))]

    def unbounded_chain(self):
        return Chain.lazy(lambda n: Element(self.family_id, (n,) * self.dim), limit=(INF,) * self.dim, label="n")


# ==========================================
# Registry
# ==========================================

_PATTERNS = [
    (re.compile(r"N"), lambda m: Naturals()),
    (re.compile(r"N_inf|N∪\{∞\}"), lambda m: ExtendedNaturals()),
    (re.compile(r"S"), lambda m: DyadicUnion()),
    (re.compile(r"S_(\d+)"), lambda m: DyadicStage(int(m.group(1)))),
    (re.compile(r"Q\+"), lambda m: PositiveRationals()),
    (re.compile(r"T([12])"), lambda m: Doubled(f"T{m.group(1)}")),
    (re.compile(r"T_(\d+)"), lambda m: ChainMonoid(int(m.group(1)))),
    (re.compile(r"T_omega"), lambda m: ChainMonoid(None, top=False)),
    (re.compile(r"T_omega_inf"), lambda m: ChainMonoid(None, top=True)),
    (re.compile(r"N\^(\d+)"), lambda m: NaturalsPower(int(m.group(1)))),
]

FAMILY_NAMES = ["N", "N_inf", "S", "S_<i>", "Q+", "T1", "T2", "T_<n>", "T_omega", "T_omega_inf", "N^<d>"]


@lru_cache(maxsize=None)
def family_handle(family_id: str) -> MonoidHandle:
    family_id = family_id.strip()
    for pattern, factory in _PATTERNS:
        m = pattern.fullmatch(family_id)
        if m:
            return factory(m)
    raise UnknownFamily(f"unknown family '{family_id}'")


@dataclass(frozen=True)
class FamilyRules:
    family_id: str
    order: str
    way_below: str
    sup: str
    handle: MonoidHandle

    @property
    def leq(self) -> Callable[[Element, Element], bool]:
        return self.handle.leq

    @property
    def add(self) -> Callable[[Element, Element], Element]:
        return self.handle.add

    @property
    def way_below_fn(self) -> Callable[[Element, Element], Optional[bool]]:
        return self.handle.way_below_rule

    @property
    def sup_fn(self) -> Callable[[Chain, int], Optional[SupVerdict]]:
        return self.handle.sup_rule

    @property
    def approximant(self) -> Callable[[Element], Optional[Chain]]:
        return self.handle.approximant_chain

    def to_dict(self) -> dict:
        h = self.handle
        return {
            "family": self.family_id,
            "claimed_class": h.claimed_class.value,
            "all_compact": h.all_compact,
            "finite": h.is_finite,
            "order": self.order,
            "way_below": self.way_below,
            "sup": self.sup,
        }


_RULE_TEXT = {
    Naturals: ("usual order", "x ≪ y iff x ≤ y", "bounded chains stationary; unbounded: none"),
    ExtendedNaturals: ("usual order, ∞ top", "x ≪ y iff x finite and x ≤ y", "pointwise limit, ∞ if unbounded"),
    DyadicStage: ("usual order", "x ≪ y iff x ≤ y", "bounded chains stationary; unbounded: none"),
    DyadicUnion: ("usual order", "x ≪ y iff x < y or x = 0", "limit if dyadic, else none"),
    PositiveRationals: ("usual order", "x ≪ y iff x < y or x = 0", "limit if rational, else none"),
    ChainMonoid: ("index order, a_i + a_j = a_max(i,j)", "x ≪ y iff x ≤ y, x ≠ a_inf", "limit index, a_inf if unbounded"),
    NaturalsPower: ("coordinatewise", "x ≪ y iff x ≤ y", "coordinatewise limit if finite"),
}

_DOUBLED_TEXT = {
    "T1": ("a' ≤ b iff a ≤ b; a ≤ b' iff a < b", "x ≪ y iff x < y or x = y ∈ S", "non-stationary with limit r ∈ S: r'"),
    "T2": ("a' ≤ b iff a < b; a ≤ b' iff a < b", "x ≪ y iff x ≤ y", "stationary chains only"),
}


def family_rules(family_id: str) -> FamilyRules:
    handle = family_handle(family_id)
    if isinstance(handle, Doubled):
        order, wb, sup = _DOUBLED_TEXT[handle.variant]
    else:
        order, wb, sup = _RULE_TEXT[type(handle)]
    return FamilyRules(handle.family_id, order, wb, sup, handle)


# ==========================================
# Maps between catalog families
# ==========================================

def _value_map(name: str, dom: LinearFamily, cod: LinearFamily,
               preimage: Optional[Callable[[Element, int], Preimage]] = None) -> MapDescriptor:
    return MapDescriptor(
        name=name,
        dom=dom,
        cod=cod,
        fn=lambda x: cod.from_value(dom.base(x)),
        limit_map=lambda v: v,
        preimage=preimage,
    )


def _value_preimage(dom: LinearFamily, cod: LinearFamily):
    def preimage(x: Element, budget: int) -> Preimage:
        value = cod.base(x)
        if cod.tag(x) == "" and dom.contains_value(value):
            return Preimage(element=dom.from_value(value))
        return Preimage(refutation=f"{cod.format(x)} is not in {dom.family_id}")

    return preimage


def scaled_dyadic_inclusion(i: int) -> MapDescriptor:
    """f_i: S_i → S_{i+1}, n/2^i ↦ 2n/2^(i+1)."""
    if i < 0:
        raise ValueError("stage must be nonnegative")
    dom, cod = family_handle(f"S_{i}"), family_handle(f"S_{i + 1}")
    return _value_map(f"f_{i}", dom, cod, _value_preimage(dom, cod))


def dyadic_composite(m: int, i: int) -> MapDescriptor:
    """f_{m,i} = f_{m-1} ∘ ... ∘ f_i (identity when m == i)."""
    if m < i:
        raise ValueError("m must be at least i")
    f = identity_map(family_handle(f"S_{i}"))
    for j in range(i, m):
        f = scaled_dyadic_inclusion(j).compose(f)
    return f


def stage_to_union(i: int) -> MapDescriptor:
    """φ_i: S_i → S."""
    dom, cod = family_handle(f"S_{i}"), family_handle("S")
    return _value_map(f"phi_{i}", dom, cod, _value_preimage(dom, cod))


def union_inclusion(variant: str) -> MapDescriptor:
    """i_j: S → T_j onto the unprimed copy."""
    dom, cod = family_handle("S"), family_handle(variant)
    return _value_map(f"i_{variant}", dom, cod, _value_preimage(dom, cod))


def prime_collapse(variant: str, target: str = "S") -> MapDescriptor:
    """γ: T_j → S (or ℚ⁺) identifying a and a'."""
    dom, cod = family_handle(variant), family_handle(target)
    return _value_map(f"gamma_{variant}->{target}", dom, cod)


def naturals_inclusion() -> MapDescriptor:
    """ι: ℕ → ℕ ∪ {∞}."""
    dom, cod = family_handle("N"), family_handle("N_inf")
    return _value_map("iota_N", dom, cod, _value_preimage(dom, cod))


def chain_inclusion(m: Optional[int], n: Optional[int], top: bool = False) -> MapDescriptor:
    """Index inclusion T_m → T_n (None for T_omega)."""
    dom = family_handle(f"T_{m}" if m is not None else "T_omega")
    cod_id = f"T_{n}" if n is not None else ("T_omega_inf" if top else "T_omega")
    cod = family_handle(cod_id)
    if m is not None and n is not None and m > n:
        raise ValueError("inclusion needs m <= n")
    return _value_map(f"incl_{dom.family_id}->{cod.family_id}", dom, cod, _value_preimage(dom, cod))


def catalog_map(name: str) -> MapDescriptor:
    """Resolve a named catalog map as used in spec files."""
    name = name.strip()
    patterns = [
        (r"f_(\d+)", lambda m: scaled_dyadic_inclusion(int(m.group(1)))),
        (r"f_(\d+),(\d+)", lambda m: dyadic_composite(int(m.group(1)), int(m.group(2)))),
        (r"phi_(\d+)", lambda m: stage_to_union(int(m.group(1)))),
        (r"i_(T[12])", lambda m: union_inclusion(m.group(1))),
        (r"gamma_(T[12])->(S|Q\+)", lambda m: prime_collapse(m.group(1), m.group(2))),
        (r"iota_N", lambda m: naturals_inclusion()),
        (r"incl_T_(\d+)->T_(\d+)", lambda m: chain_inclusion(int(m.group(1)), int(m.group(2)))),
        (r"id_(.+)", lambda m: identity_map(family_handle(m.group(1)))),
    ]
    for pattern, factory in patterns:
        m = re.fullmatch(pattern, name)
        if m:
            return factory(m)
    raise UnknownFamily(f"unknown catalog map '{name}'")


def catalog_handles() -> List[MonoidHandle]:
    """Representative handles of every family, used by listings and suites."""
    ids = ["N", "N_inf", "S_2", "S", "Q+", "T1", "T2", "T_3", "T_omega", "T_omega_inf", "N^2"]
    return [family_handle(i) for i in ids]


def parse_value(handle: MonoidHandle, text: str) -> Element:
    """Element from its printed form ("3/2", "3/2'", "a2", "(1,2)", "inf")."""
    text = text.strip()
    if isinstance(handle, NaturalsPower):
        return handle.element(tuple(v for v in text.strip("()").split(",")))
    payload: Any = text
    if text in ("inf", "∞"):
        payload = INF
    return handle.element(payload)

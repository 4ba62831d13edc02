"""
The Cuntz semigroup model V ⊔ LAff(T)⁺⁺ over a trace simplex with k extreme points.

T is the standard (k-1)-simplex, so an affine function is its tuple of values at
the extreme traces, and a projection class p contributes p̂ = ρ(p). Elements are
payload tuples:

    ("0",)              the zero class
    ("P", v)            a nonzero projection class v of V
    ("F", (f1,...,fk))  a strictly positive affine function (inf allowed in the Cu variant)

The W variant (bounded functions) is the pre-completion; the Cu variant adds
infinite values and is its completion.
"""
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Any, Callable, List, Optional, Sequence, Tuple

from app.services.completion import completion_of
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
    check_monotone,
    check_order_axioms,
    check_rapid,
    is_order_embedding,
    is_precu_morphism,
    resolve_budget,
    sup_chain,
    way_below,
)
from app.services.cuts import INF, format_limit, is_exact
from app.services.errors import GridExhausted, ModelMismatch, NotAllCompact, SupFailed, ValidationError
from app.services.finite_lab import FiniteMonoid, build_completion_bruteforce
from app.utils.settings import settings

logger = logging.getLogger(__name__)

Values = Tuple[Any, ...]


def _pos(v) -> bool:
    return v > 0


@dataclass(frozen=True, eq=False)
class SimplexModel:
    """k extreme traces, the projection monoid V and its state map ρ."""

    name: str
    k: int
    v: MonoidHandle
    rho: Callable[[Element], Values]

    @classmethod
    def linear(cls, name: str, k: int, v: MonoidHandle, matrix: Sequence[Sequence[Any]]) -> "SimplexModel":
        """
        ρ from a rational matrix: one row per generator of ℕ^d (or the single
        generator of ℕ), or one row per element of a finite table.
        """
        rows = tuple(tuple(Fraction(c) for c in row) for row in matrix)
        if any(len(row) != k for row in rows):
            raise ValidationError(name, f"every row of the state matrix needs {k} entries")

        if isinstance(v, FiniteMonoid):
            if len(rows) != v.size:
                raise ValidationError(name, f"state matrix needs one row per element of {v.family_id}")
            rho = lambda x: rows[x.payload]  # noqa: E731
        elif isinstance(v.zero.payload, tuple):
            if len(rows) != len(v.zero.payload):
                raise ValidationError(name, f"state matrix needs one row per generator of {v.family_id}")
            rho = lambda x: tuple(sum((n * row[t] for n, row in zip(x.payload, rows)), Fraction(0))  # noqa: E731
                                  for t in range(k))
        else:
            if len(rows) != 1:
                raise ValidationError(name, f"state matrix of {v.family_id} has a single row")
            rho = lambda x: tuple(x.payload * c for c in rows[0])  # noqa: E731
        return cls(name, k, v, rho)

    def state(self, x: Element) -> Values:
        self.v.check(x)
        return tuple(self.rho(x))

    def validate(self, sample: Optional[Sequence[Element]] = None) -> List[str]:
        v = self.v
        sample = v.elements() if v.is_finite else (sample or v.sample(8))
        problems = []
        if any(c != 0 for c in self.state(v.zero)):
            problems.append("state of zero is not zero")
        for x in sample:
            values = self.state(x)
            if len(values) != self.k:
                problems.append(f"state of {v.format(x)} has {len(values)} coordinates")
            elif not v.eq(x, v.zero) and not all(_pos(c) for c in values):
                problems.append(f"state of {v.format(x)} is not strictly positive")
        for x, y in product(sample, repeat=2):
            sx, sy = self.state(x), self.state(y)
            summed = self.state(v.add(x, y))
            if summed != tuple(a + b for a, b in zip(sx, sy)):
                problems.append(f"state map not additive at ({v.format(x)}, {v.format(y)})")
            if v.leq(x, y) and not v.eq(x, y) and not all(a < b for a, b in zip(sx, sy)):
                problems.append(f"state map not strictly monotone at ({v.format(x)}, {v.format(y)})")
        return problems

    def checked(self, sample: Optional[Sequence[Element]] = None) -> "SimplexModel":
        problems = self.validate(sample)
        if problems:
            logger.warning("model %s: %s", self.name, problems[0])
            raise ValidationError(self.name, problems[0])
        return self

    @cached_property
    def w(self) -> "ElliottModel":
        return ElliottModel(self, complete=False)

    @cached_property
    def cu(self) -> "ElliottModel":
        return ElliottModel(self, complete=True)


class ElliottModel(MonoidHandle):
    """V ⊔ LAff_b⁺⁺ (complete=False) or V ⊔ LAff⁺⁺ (complete=True) as a monoid handle."""

    def __init__(self, model: SimplexModel, complete: bool):
        self.model = model
        self.complete = complete
        suffix = "Cu" if complete else "W"
        claimed = MonoidClass.CU if complete else MonoidClass.PRECU
        super().__init__(f"{model.name}-{suffix}", claimed)

    def check(self, *xs):
        for x in xs:
            if not isinstance(x, Element) or x.family_id != self.family_id:
                raise ModelMismatch(f"{x} is not an element of {self.family_id}")

    # --- payloads ---
    def zero_payload(self):
        return ("0",)

    def canonical(self, payload):
        kind = payload[0]
        if kind == "0":
            return ("0",)
        if kind == "P":
            x = self.model.v.element(payload[1])
            if self.model.v.eq(x, self.model.v.zero):
                return ("0",)
            return ("P", x.payload)
        if kind == "F":
            values = tuple(v if v == INF else Fraction(v) for v in payload[1])
            if len(values) != self.model.k:
                raise ValueError(f"F needs {self.model.k} values, got {len(values)}")
            if not all(_pos(v) for v in values):
                raise ValueError("F values must be strictly positive")
            if INF in values and not self.complete:
                raise ValueError("infinite values only exist in the Cu variant")
            return ("F", values)
        raise ValueError(f"unknown model element {payload!r}")

    def P(self, v) -> Element:
        return self.element(("P", v.payload if isinstance(v, Element) else v))

    def F(self, *values) -> Element:
        return self.element(("F", tuple(values)))

    def values(self, x: Element) -> Values:
        """Evaluation at the extreme traces."""
        kind = x.payload[0]
        if kind == "0":
            return (Fraction(0),) * self.model.k
        if kind == "P":
            return self.model.state(self.model.v.element(x.payload[1]))
        return x.payload[1]

    def format(self, x):
        kind = x.payload[0]
        if kind == "0":
            return "0"
        if kind == "P":
            return f"P({self.model.v.format(self.model.v.element(x.payload[1]))})"
        return "F(" + ",".join(format_limit(v) for v in x.payload[1]) + ")"

    # --- order rules ---
    def add(self, x, y):
        a, b = x.payload[0], y.payload[0]
        if a == "0":
            return y
        if b == "0":
            return x
        if a == "P" and b == "P":
            v = self.model.v
            return self.P(v.add(v.element(x.payload[1]), v.element(y.payload[1])))
        return self.element(("F", tuple(s + t for s, t in zip(self.values(x), self.values(y)))))

    def leq(self, x, y):
        a, b = x.payload[0], y.payload[0]
        if a == "0":
            return True
        if b == "0":
            return False
        if a == "P" and b == "P":
            v = self.model.v
            return v.leq(v.element(x.payload[1]), v.element(y.payload[1]))
        fx, fy = self.values(x), self.values(y)
        if a == "P":
            # a projection sits below a function only strictly
            return all(s < t for s, t in zip(fx, fy))
        return all(s <= t for s, t in zip(fx, fy))

    def way_below_rule(self, x, y):
        a, b = x.payload[0], y.payload[0]
        if a == "0":
            return True
        if b != "F":
            # compact targets
            return self.leq(x, y)
        fx, fy = self.values(x), self.values(y)
        return all(s != INF and s < t for s, t in zip(fx, fy))

    def is_compact_class(self, x: Element) -> bool:
        return x.payload[0] != "F"

    def value_limit(self, x):
        return self.values(x)

    def approximant_chain(self, x):
        if x.payload[0] != "F":
            return Chain.stationary(x, label=f"const {self.format(x)}", limit=self.values(x))
        target = x.payload[1]

        def term(n: int) -> Element:
            return self.element(("F", tuple(
                Fraction(n + 1) if g == INF else g * (1 - Fraction(1, 2 ** (n + 1))) for g in target
            )))

        return Chain.lazy(term, limit=target, rapid=True, label=f"{self.format(x)}(1-2^-(n+1))")

    def sup_rule(self, chain, budget):
        return model_sup(self, chain, budget)

    # --- sampling ---
    def enumerate(self, index):
        if index == 0:
            return self.zero
        k = self.model.k
        v = self.model.v
        if index % 3 == 1:
            x = v.enumerate(index // 3 + 1)
            if x is not None and not v.eq(x, v.zero):
                return self.P(x)
        values = [Fraction(1 + (index * (t + 2)) % 7, 2 + (index + t) % 3) for t in range(k)]
        if self.complete and index % 9 == 8:
            values[0] = INF
        return self.element(("F", tuple(values)))

    def probe_chains(self):
        k = self.model.k
        chain = Chain.lazy(
            lambda n: self.element(("F", (1 - Fraction(1, 2 ** (n + 1)),) * k)),
            limit=(Fraction(1),) * k,
            label="F(1-2^-(n+1))",
        )
        return [BoundedChain(chain, self.element(("F", (Fraction(1),) * k)))]

    def unbounded_chain(self):
        k = self.model.k
        return Chain.lazy(lambda n: self.element(("F", (Fraction(n + 1),) * k)), limit=(INF,) * k,
                          label="F(n+1)")


def model_chain(handle: ElliottModel, fn: Callable[[int], Element], limit: Values, label: str = "") -> Chain:
    return Chain.lazy(fn, limit=tuple(limit), label=label or "model chain")


def model_sup(handle: ElliottModel, chain: Chain, budget: int) -> Optional[SupVerdict]:
    """Pointwise supremum of a lazy chain from its declared limit tuple."""
    limit = chain.limit
    if not isinstance(limit, tuple) or len(limit) != handle.model.k:
        return None
    if not all(is_exact(v) for v in limit):
        return SupVerdict.unknown(reason="irrational limit outside the rational model")
    prefix = chain.prefix(chain.explore_length(budget))
    if any(s > l for x in prefix for s, l in zip(handle.values(x), limit)):
        logger.warning("%s: %s exceeds its declared limit", handle.family_id, chain.label)
        return SupVerdict.unknown(reason="terms exceed the declared limit")

    last = prefix[-1]
    # 1. eventually constant projection classes
    if last.payload[0] != "F" and handle.values(last) == tuple(limit):
        return SupVerdict.sup(last, reason="eventually constant")
    # 2. pointwise supremum of the trace values
    if any(v == INF for v in limit) and not handle.complete:
        return SupVerdict.no_sup(ChainWitness(chain, len(prefix)), reason="unbounded trace values")
    return SupVerdict.sup(handle.element(("F", tuple(limit))), reason="pointwise supremum")


# ==========================================
# Named operations
# ==========================================

def _checked(handle: ElliottModel, *xs: Element) -> None:
    if not isinstance(handle, ElliottModel):
        raise ModelMismatch(f"{handle} is not a Cuntz-semigroup model")
    handle.check(*xs)


def w_leq(handle: ElliottModel, x: Element, y: Element) -> bool:
    _checked(handle, x, y)
    return handle.leq(x, y)


def w_add(handle: ElliottModel, x: Element, y: Element) -> Element:
    _checked(handle, x, y)
    return handle.add(x, y)


def w_way_below(handle: ElliottModel, x: Element, y: Element) -> bool:
    _checked(handle, x, y)
    return handle.way_below_rule(x, y)


def cu_sup(handle: ElliottModel, chain: Chain, budget: Optional[int] = None) -> Element:
    budget = resolve_budget(budget)
    check_monotone(handle, chain, budget)
    verdict = sup_chain(handle, chain, budget)
    if not verdict.found:
        raise SupFailed(f"{handle.family_id}: {verdict.reason or 'no supremum'}")
    return verdict.value


def grid_values(step: Fraction, cap: Fraction, with_inf: bool = False) -> List[Any]:
    out = []
    v = step
    while v <= cap:
        out.append(v)
        v += step
    if with_inf:
        out.append(INF)
    return out


def grid_candidates(handle: ElliottModel, step: Optional[Fraction] = None, cap: Optional[Fraction] = None,
                    v_sample: Sequence[Element] = ()) -> List[Element]:
    step = settings.grid_step if step is None else step
    cap = settings.grid_cap if cap is None else cap
    coords = grid_values(step, cap, with_inf=handle.complete)
    out = [handle.zero] + [handle.P(v) for v in v_sample if not handle.model.v.eq(v, handle.model.v.zero)]
    out += [handle.element(("F", values)) for values in product(coords, repeat=handle.model.k)]
    return out


def grid_least_upper_bounds(handle: ElliottModel, terms: Sequence[Element],
                            candidates: Sequence[Element]) -> List[Element]:
    """The least candidate bounding every term, as a one-element list, or [] if there is none."""
    uppers = [u for u in candidates if all(handle.leq(x, u) for x in terms)]
    if not uppers:
        return []
    least = uppers[0]
    for u in uppers[1:]:
        if handle.leq(u, least):
            least = u
    return [least] if all(handle.leq(least, w) for w in uppers) else []


# ==========================================
# Completion of the W model
# ==========================================

def model_inclusion(model: SimplexModel) -> MapDescriptor:
    w, cu = model.w, model.cu
    return MapDescriptor(
        name=f"incl_{model.name}",
        dom=w,
        cod=cu,
        fn=lambda x: Element(cu.family_id, x.payload),
        limit_map=lambda v: v,
    )


def verify_model_completion(model: SimplexModel, sample: Optional[Sequence[Element]] = None,
                            budget: Optional[int] = None) -> EvidenceReport:
    """The inclusion W -> Cu satisfies the completion definition on the sample."""
    budget = resolve_budget(budget)
    w, cu = model.w, model.cu
    inc = model_inclusion(model)
    w_sample = w.sample(12)
    cu_sample = list(sample) if sample is not None else cu.sample(12)
    report = EvidenceReport(subject=f"completion of {w.family_id} by {cu.family_id}")

    embedding = is_order_embedding(inc, w, cu, w_sample, budget)
    report.add("order-embedding", embedding.status, None if embedding.passed else embedding.failures[0].witness)
    morphism = is_precu_morphism(inc, w, cu, w_sample, budget)
    for check in morphism.checks:
        if check.property in ("way-below preserving", "sup preserving"):
            report.checks.append(check)

    bad, unknown = None, False
    for y in cu_sample:
        cu.check(y)
        chain = cu.approximant_chain(y)
        # the approximants have finite values, so they live in W
        in_w = chain.map(lambda x: Element(w.family_id, x.payload), limit=None, label=chain.label)
        rapid = check_rapid(w, in_w, min(budget, 16))
        if not rapid.is_true:
            bad = cu.format(y)
            break
        sup = sup_chain(cu, chain, budget)
        if sup.status == SupStatus.UNKNOWN:
            unknown = True
        elif not (sup.found and cu.eq(sup.value, y)):
            bad = cu.format(y)
            break
    status = Status.FAIL if bad else (Status.UNKNOWN if unknown else Status.PASS)
    report.add("sup of a rapid sequence from W", status, bad)
    report.budget_spent = budget
    return report


# ==========================================
# Comparison properties
# ==========================================

def multiple(handle: MonoidHandle, x: Element, n: int) -> Element:
    out = handle.zero
    for _ in range(n):
        out = handle.add(out, x)
    return out


def almost_unperforated(handle: ElliottModel, sample: Sequence[Element],
                        cap: Optional[int] = None) -> EvidenceReport:
    cap = settings.perforation_cap if cap is None else cap
    report = EvidenceReport(subject=f"almost unperforated {handle.family_id}")
    bad = None
    for x, y in product(sample, repeat=2):
        for n in range(1, cap + 1):
            if handle.leq(multiple(handle, x, n + 1), multiple(handle, y, n)) and not handle.leq(x, y):
                bad = {"x": handle.format(x), "y": handle.format(y), "n": n}
                break
        if bad:
            break
    report.add("(n+1)x <= ny implies x <= y", Status.FAIL if bad else Status.PASS, bad, f"n <= {cap}")
    return report


def divisor(handle: ElliottModel, x: Element, n: int) -> Element:
    """y = x/n, so that ny <= x <= (n+1)y; GridExhausted if the quotient is not a class."""
    if n < 1:
        raise ValueError("n must be positive")
    if x.payload[0] == "0":
        return handle.zero
    values = tuple(v if v == INF else v / n for v in handle.values(x))
    y = handle.element(("F", values))
    if handle.leq(multiple(handle, y, n), x) and handle.leq(x, multiple(handle, y, n + 1)):
        return y
    raise GridExhausted(f"no divisor of {handle.format(x)} by {n}")


def almost_divisible(handle: ElliottModel, sample: Sequence[Element], ns: Sequence[int] = (1, 2, 3)) -> EvidenceReport:
    report = EvidenceReport(subject=f"almost divisible {handle.family_id}")
    for x in sample:
        for n in ns:
            try:
                y = divisor(handle, x, n)
            except GridExhausted as e:
                report.add("divisor", Status.UNKNOWN, {"x": handle.format(x), "n": n}, e.message)
                continue
            report.add("divisor", Status.PASS, {"x": handle.format(x), "n": n, "y": handle.format(y)})
    return report


@dataclass
class ComparisonResult:
    premise: bool
    order: bool

    @property
    def holds(self) -> bool:
        return not self.premise or self.order


def r_comparison(handle: ElliottModel, a: Element, b: Element, r) -> ComparisonResult:
    """s(a) + r < s(b) at every extreme trace, and whether a <= b follows."""
    r = Fraction(r)
    if r < 0:
        raise ValueError("r must be nonnegative")
    _checked(handle, a, b)
    premise = all(s + r < t for s, t in zip(handle.values(a), handle.values(b)))
    return ComparisonResult(premise, handle.leq(a, b))


def radius_estimate(handle: ElliottModel, test_set: Sequence[Element], step: Optional[Fraction] = None,
                    cap: Optional[Fraction] = None) -> Fraction:
    """Least grid r for which r-comparison implies the order on the test set; an upper-bound estimate."""
    step = settings.grid_step if step is None else step
    if cap is None:
        # beyond the largest finite trace value the premise is never met
        finite = [v for x in test_set for v in handle.values(x) if v != INF]
        cap = max([settings.grid_cap] + finite)
    for r in [Fraction(0)] + grid_values(step, cap + step):
        if all(r_comparison(handle, a, b, r).holds for a, b in product(test_set, repeat=2)):
            return r
    raise GridExhausted(f"no r <= {cap} gives comparison on the test set")


def comparison_predicates(handle: ElliottModel, sample: Sequence[Element],
                          pairs: Sequence[Tuple[Element, Element, Any]] = (),
                          ns: Sequence[int] = (1, 2, 3)) -> EvidenceReport:
    report = EvidenceReport(subject=f"comparison properties of {handle.family_id}")
    report.checks.extend(almost_unperforated(handle, sample).checks)
    report.checks.extend(almost_divisible(handle, sample, ns).checks)
    for a, b, r in pairs:
        result = r_comparison(handle, a, b, r)
        witness = {"a": handle.format(a), "b": handle.format(b), "r": str(Fraction(r)),
                   "premise": result.premise, "order": result.order}
        report.add("r-comparison", Status.PASS if result.holds else Status.FAIL, witness)
    try:
        r = radius_estimate(handle, sample)
        report.add("radius of comparison", Status.PASS, {"upper_bound": str(r)}, "grid estimate, not exact")
    except GridExhausted as e:
        report.add("radius of comparison", Status.UNKNOWN, detail=e.message)
    return report


# ==========================================
# Real rank zero: intervals of V
# ==========================================

def rr0_model(v: MonoidHandle) -> MonoidHandle:
    """Λσ(V) as the interval completion of an all-compact V."""
    if not (v.all_compact or v.is_finite):
        raise NotAllCompact(f"{v.family_id} has non-compact elements")
    return completion_of(v)


def rr0_report(v: MonoidHandle, budget: Optional[int] = None) -> EvidenceReport:
    budget = resolve_budget(budget)
    bar = rr0_model(v)
    report = EvidenceReport(subject=f"interval model of {v.family_id}", exhaustive=v.is_finite)
    if isinstance(v, FiniteMonoid):
        done = build_completion_bruteforce(v)
        report.checks.extend(done.isomorphism.checks)
        report.notes.append(f"{len(done.ideals)} ideals")
        return report

    sample = bar.sample(8)
    axioms = check_order_axioms(bar, sample)
    report.add("order axioms", axioms.status, None if axioms.passed else axioms.failures[0].witness)
    chain = v.unbounded_chain()
    if chain is not None:
        top = bar.sup_rule(bar.unbounded_chain(), budget)
        if top is None or not top.found:
            report.add("unbounded class", Status.UNKNOWN)
        else:
            dominates = all(bar.leq(x, top.value) for x in sample)
            compact = way_below(bar, top.value, top.value, budget)
            report.add("unbounded class dominates the sample", Status.PASS if dominates else Status.FAIL)
            report.add("unbounded class not compact", Status.PASS if compact.is_false else Status.FAIL)
    return report


def model_corpus() -> List[SimplexModel]:
    """Valid models with k in {1, 2, 3} over ℕ, ℕ² and the trivial table."""
    from app.services.catalog import family_handle

    N, N2, N3 = family_handle("N"), family_handle("N^2"), family_handle("N^3")
    trivial = FiniteMonoid(1, [[0]], [[True]], 0, ["0"], name="V0")
    specs = [
        ("U1", 1, N, [[1]]),
        ("U2", 2, N, [[1, 1]]),
        ("U3", 3, N, [[1, 2, 3]]),
        ("Q1", 1, N, [["1/2"]]),
        ("D2", 2, N2, [[1, "1/2"], ["1/2", 1]]),
        ("E2", 2, N2, [[1, 2], [2, 1]]),
        ("D3", 3, N3, [[1, 1, "1/2"], [1, "1/2", 1], ["1/2", 1, 1]]),
        ("M3", 3, N2, [[1, 1, 2], ["1/3", 1, 1]]),
        ("Z1", 1, trivial, [[0]]),
        ("Z2", 2, trivial, [[0, 0]]),
        ("Z3", 3, trivial, [[0, 0, 0]]),
    ]
    return [SimplexModel.linear(name, k, v, m).checked() for name, k, v, m in specs]


# ==========================================
# Model suites
# ==========================================

def compactness_report(handle: ElliottModel, sample: Sequence[Element], budget: Optional[int] = None) -> EvidenceReport:
    """x ≪ x exactly for zero and projection classes, by the rule and by approximants."""
    budget = resolve_budget(budget)
    report = EvidenceReport(subject=f"compact elements of {handle.family_id}")
    bad = None
    for x in sample:
        by_rule = w_way_below(handle, x, x)
        searched = way_below(handle, x, x, budget)
        if by_rule != handle.is_compact_class(x) or searched.is_unknown or searched.is_true != by_rule:
            bad = handle.format(x)
            break
    report.add("compact iff zero or projection", Status.FAIL if bad else Status.PASS, bad,
               f"{len(sample)} sampled classes")
    return report


def _approximant_below(handle: ElliottModel, f: Values, g: Values, depth: int = 40) -> bool:
    """f sits below some g(1-2^-(n+1)), n < depth."""
    return any(
        all(s <= t * (1 - Fraction(1, 2 ** (n + 1))) for s, t in zip(f, g))
        for n in range(depth)
    )


def way_below_grid_report(handle: ElliottModel, size: int = 10, step: Fraction = Fraction(1, 10)) -> EvidenceReport:
    """
    On a size x size grid per coordinate pair: F(f) ≪ F(g) implies f < g, and
    f < g implies F(f) ≪ F(g). The rule is compared with an approximant test.
    """
    k = handle.model.k
    report = EvidenceReport(subject=f"way-below on F classes of {handle.family_id}", exhaustive=True)
    grid = [step * (j + 1) for j in range(size)]
    pairs = [(0, 0)] if k == 1 else [(a, b) for a in range(k) for b in range(a + 1, k)]
    first, second, checked = None, None, 0
    for a, b in pairs:
        tuples = []
        for u, w in product(grid, repeat=1 if k == 1 else 2):
            values = [Fraction(1)] * k
            values[a] = u
            if k > 1:
                values[b] = w
            tuples.append(tuple(values))
        for f, g in product(tuples, repeat=2):
            checked += 1
            rule = w_way_below(handle, handle.element(("F", f)), handle.element(("F", g)))
            strict = all(s < t for s, t in zip(f, g))
            if rule and not strict and first is None:
                first = {"f": handle.format(handle.element(("F", f))), "g": handle.format(handle.element(("F", g)))}
            if strict and not (rule and _approximant_below(handle, f, g)) and second is None:
                second = {"f": handle.format(handle.element(("F", f))), "g": handle.format(handle.element(("F", g)))}
    report.add("way-below implies strictly below", Status.FAIL if first else Status.PASS, first)
    report.add("strictly below implies way-below", Status.FAIL if second else Status.PASS, second)
    report.budget_spent = checked
    return report


def random_model_chains(handle: ElliottModel, count: int, seed: int = 0,
                        step: Fraction = Fraction(1, 4), cap: Fraction = Fraction(2)) -> List[Chain]:
    """Increasing chains with grid limits: F tails, constant projections and (Cu) infinite coordinates."""
    rng = random.Random(seed)
    k = handle.model.k
    coords = grid_values(step, cap)
    v = handle.model.v
    projections = [x for x in v.sample(6) if not v.eq(x, v.zero)]
    chains = []
    for j in range(count):
        kind = rng.choice(["F", "F", "P", "inf"] if handle.complete else ["F", "F", "P"])
        if kind == "P" and projections:
            x = handle.P(rng.choice(projections))
            chains.append(Chain.lazy(lambda n, x=x: x, limit=handle.values(x), label=f"const {handle.format(x)}"))
            continue
        target = tuple(rng.choice(coords) for _ in range(k))
        if kind == "inf":
            spot = rng.randrange(k)
            target = tuple(INF if t == spot else c for t, c in enumerate(target))

        def term(n: int, target=target) -> Element:
            return handle.element(("F", tuple(
                Fraction(n + 1) if g == INF else g * (1 - Fraction(1, 2 ** (n + 1))) for g in target
            )))

        chains.append(model_chain(handle, term, target, label=f"chain {j} to {format_limit(target)}"))
    return chains


def sup_oracle_report(handle: ElliottModel, count: int = 100, seed: int = 0, budget: Optional[int] = None,
                      prefix: int = 8) -> EvidenceReport:
    """cu_sup against the least upper bounds among grid candidates of each chain's prefix."""
    budget = resolve_budget(budget)
    step, cap = Fraction(1, 4), Fraction(2)
    v = handle.model.v
    candidates = grid_candidates(handle, step, cap, v.sample(6))
    report = EvidenceReport(subject=f"suprema of {handle.family_id} vs grid search")
    bad = None
    for chain in random_model_chains(handle, count, seed, step, cap):
        try:
            sup = cu_sup(handle, chain, budget)
        except SupFailed:
            sup = None
        least = grid_least_upper_bounds(handle, chain.prefix(prefix), candidates)
        if sup is None:
            agrees = not handle.complete and any(c == INF for c in chain.limit)
        else:
            agrees = len(least) == 1 and handle.eq(least[0], sup)
        if not agrees:
            bad = {"chain": chain.label, "sup": None if sup is None else handle.format(sup),
                   "grid": [handle.format(u) for u in least]}
            break
    report.add("supremum is the least grid upper bound", Status.FAIL if bad else Status.PASS, bad,
               f"{count} chains, grid step {step}, cap {cap}")
    return report


def model_report(model: SimplexModel, budget: Optional[int] = None, chains: int = 20,
                 seed: int = 0) -> EvidenceReport:
    """Validity, compactness, way-below grid, completion and comparison checks of one model."""
    budget = resolve_budget(budget)
    report = EvidenceReport(subject=f"model {model.name} (k={model.k}, V={model.v.family_id})")
    problems = model.validate()
    report.add("state map valid", Status.FAIL if problems else Status.PASS, problems[0] if problems else None)
    if problems:
        return report
    w, cu = model.w, model.cu
    for sub in (
        compactness_report(w, w.sample(10), budget),
        compactness_report(cu, cu.sample(10), budget),
        way_below_grid_report(w),
        verify_model_completion(model, budget=budget),
        sup_oracle_report(cu, chains, seed, budget),
        comparison_predicates(w, w.sample(6)),
    ):
        for check in sub.checks:
            report.add(f"{sub.subject}: {check.property}", check.status, check.witness, check.detail)
    report.budget_spent = budget
    return report

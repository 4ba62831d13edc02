"""
Brute-force laboratory over finite positively ordered abelian monoids.

A `FiniteMonoid` is an explicit addition table plus an order matrix. On a
finite carrier every increasing sequence is stationary, so ≪ is ≤ and all the
"for every sequence" quantifiers become finite checks; this module uses that
to build the ideal completion by enumeration and to test the universal
property by searching all maps.
"""
import logging
import random
from dataclasses import dataclass
from itertools import combinations, product
from typing import Dict, List, Optional, Sequence, Tuple

from app.services.completion import (
    IntervalDesc,
    completion_leq,
    completion_of,
    extend_universal,
    interval_add,
)
from app.services.core_order import (
    Chain,
    Element,
    EvidenceReport,
    MapDescriptor,
    MonoidClass,
    MonoidHandle,
    Status,
    check_order_axioms,
    check_precu_membership,
    identity_map,
    is_hereditary,
    is_order_embedding,
    is_precu_morphism,
    sup_chain,
    way_below,
)
from app.services.cuts import SetCut
from app.services.errors import CarrierTooLarge, SearchSpaceTooLarge, ValidationError
from app.utils.settings import settings

logger = logging.getLogger(__name__)


class FiniteMonoid(MonoidHandle):
    """Payloads are indices 0..size-1."""

    def __init__(self, size: int, add_table: Sequence[Sequence[int]], order: Sequence[Sequence[bool]],
                 zero_index: int = 0, names: Optional[Sequence[str]] = None, name: str = "M"):
        super().__init__(name, MonoidClass.CU, all_compact=True)
        self.size = size
        self.add_table = tuple(tuple(int(v) for v in row) for row in add_table)
        self.order = tuple(tuple(bool(v) for v in row) for row in order)
        self.zero_index = zero_index
        self.names = tuple(names) if names else tuple(str(i) for i in range(size))

    @classmethod
    def from_pairs(cls, size: int, add_table: Sequence[Sequence[int]], pairs: Sequence[Tuple[int, int]],
                   zero_index: int = 0, names: Optional[Sequence[str]] = None, name: str = "M") -> "FiniteMonoid":
        """Order given as a list of pairs (a, b) meaning a ≤ b; reflexive pairs are implied."""
        order = [[i == j for j in range(size)] for i in range(size)]
        for a, b in pairs:
            order[a][b] = True
        return cls(size, add_table, order, zero_index, names, name)

    def checked(self) -> "FiniteMonoid":
        problems = self.validate()
        if problems:
            logger.warning("%s: invalid table: %s", self.family_id, problems[0])
            raise ValidationError(self.family_id, problems[0])
        return self

    def validate(self) -> List[str]:
        n = self.size
        if len(self.add_table) != n or any(len(row) != n for row in self.add_table):
            return [f"add table is not {n}x{n}"]
        if len(self.order) != n or any(len(row) != n for row in self.order):
            return [f"order matrix is not {n}x{n}"]
        if not 0 <= self.zero_index < n:
            return [f"zero index {self.zero_index} out of range"]
        bad = [v for row in self.add_table for v in row if not 0 <= v < n]
        if bad:
            return [f"add table entry {bad[0]} out of range"]

        s, o, z = self.add_table, self.order, self.zero_index
        name = self.names
        problems = []
        idx = range(n)
        for a, b in product(idx, repeat=2):
            if s[a][b] != s[b][a]:
                problems.append(f"not commutative at ({name[a]}, {name[b]})")
        for a, b, c in product(idx, repeat=3):
            if s[s[a][b]][c] != s[a][s[b][c]]:
                problems.append(f"not associative at ({name[a]}, {name[b]}, {name[c]})")
                break
        for a in idx:
            if s[a][z] != a:
                problems.append(f"zero is not neutral for {name[a]}")
            if not o[a][a]:
                problems.append(f"order not reflexive at {name[a]}")
            if not o[z][a]:
                problems.append(f"zero is not below {name[a]}")
        for a, b in product(idx, repeat=2):
            if a != b and o[a][b] and o[b][a]:
                problems.append(f"order not antisymmetric at ({name[a]}, {name[b]})")
            if not o[a][s[a][b]]:
                problems.append(f"order misses algebraic pair ({name[a]}, {name[a]}+{name[b]})")
        for a, b, c in product(idx, repeat=3):
            if o[a][b] and o[b][c] and not o[a][c]:
                problems.append(f"order not transitive at ({name[a]}, {name[b]}, {name[c]})")
                break
        for a, b, c in product(idx, repeat=3):
            if o[a][b] and not o[s[a][c]][s[b][c]]:
                problems.append(f"order not add-compatible at ({name[a]}, {name[b]}, {name[c]})")
                break
        return problems

    def zero_payload(self):
        return self.zero_index

    def canonical(self, payload):
        if isinstance(payload, str) and payload in self.names:
            return self.names.index(payload)
        if isinstance(payload, int) and 0 <= payload < self.size:
            return payload
        raise ValueError(f"{payload!r} is not an element of {self.family_id}")

    def format(self, x):
        return self.names[x.payload]

    def add(self, x, y):
        return Element(self.family_id, self.add_table[x.payload][y.payload])

    def leq(self, x, y):
        return self.order[x.payload][y.payload]

    def value_limit(self, x):
        return x.payload

    def approximant_chain(self, x):
        return Chain.stationary(x, label=f"const {self.format(x)}", limit=x.payload)

    @property
    def is_finite(self):
        return True

    def elements(self):
        return [Element(self.family_id, i) for i in range(self.size)]

    def enumerate(self, index):
        return Element(self.family_id, index) if 0 <= index < self.size else None

    def downset(self, i: int) -> frozenset:
        return frozenset(j for j in range(self.size) if self.order[j][i])

    def principal_cut(self, x):
        return SetCut(self.downset(x.payload))

    def chain_cut(self, chain, budget):
        sup = sup_chain(self, chain, budget)
        return self.principal_cut(sup.value) if sup.found else None

    def to_dict(self) -> dict:
        return {
            "name": self.family_id,
            "elements": list(self.names),
            "zero": self.names[self.zero_index],
            "add": [list(row) for row in self.add_table],
            "order": [[self.names[a], self.names[b]] for a in range(self.size) for b in range(self.size)
                      if a != b and self.order[a][b]],
        }


# ==========================================
# Corpus
# ==========================================

def chain_table(n: int) -> FiniteMonoid:
    """T_n = {a_0, ..., a_n} with a_i + a_j = a_max(i,j)."""
    size = n + 1
    add = [[max(i, j) for j in range(size)] for i in range(size)]
    order = [[i <= j for j in range(size)] for i in range(size)]
    return FiniteMonoid(size, add, order, 0, [f"a{i}" for i in range(size)], name=f"T{n}")


def saturating(cap: int) -> FiniteMonoid:
    """{0, ..., cap} with a + b = min(a + b, cap)."""
    size = cap + 1
    add = [[min(i + j, cap) for j in range(size)] for i in range(size)]
    order = [[i <= j for j in range(size)] for i in range(size)]
    return FiniteMonoid(size, add, order, 0, [str(i) for i in range(size)], name=f"N{cap}")


def saturating_grid(a: int, b: int) -> FiniteMonoid:
    """{0..a} x {0..b}, coordinatewise order and saturating addition."""
    points = [(i, j) for i in range(a + 1) for j in range(b + 1)]
    index = {p: k for k, p in enumerate(points)}
    add = [[index[(min(p[0] + q[0], a), min(p[1] + q[1], b))] for q in points] for p in points]
    order = [[p[0] <= q[0] and p[1] <= q[1] for q in points] for p in points]
    names = [f"({i},{j})" for i, j in points]
    return FiniteMonoid(len(points), add, order, 0, names, name=f"grid{a + 1}x{b + 1}")


def two_element() -> FiniteMonoid:
    """{0, a} with a + a = a."""
    return FiniteMonoid(2, [[0, 1], [1, 1]], [[True, True], [False, True]], 0, ["0", "a"], name="Z2")


def product_monoid(left: FiniteMonoid, right: FiniteMonoid, name: str = "") -> FiniteMonoid:
    pairs = [(i, j) for i in range(left.size) for j in range(right.size)]
    index = {p: k for k, p in enumerate(pairs)}
    add = [[index[(left.add_table[p[0]][q[0]], right.add_table[p[1]][q[1]])] for q in pairs] for p in pairs]
    order = [[left.order[p[0]][q[0]] and right.order[p[1]][q[1]] for q in pairs] for p in pairs]
    names = [f"{left.names[i]}.{right.names[j]}" for i, j in pairs]
    zero = index[(left.zero_index, right.zero_index)]
    return FiniteMonoid(len(pairs), add, order, zero, names, name=name or f"{left.family_id}x{right.family_id}")


def relabel(M: FiniteMonoid, perm: Sequence[int], name: str) -> FiniteMonoid:
    """Same monoid with element i renamed to perm[i]."""
    inv = [0] * M.size
    for i, p in enumerate(perm):
        inv[p] = i
    add = [[perm[M.add_table[inv[a]][inv[b]]] for b in range(M.size)] for a in range(M.size)]
    order = [[M.order[inv[a]][inv[b]] for b in range(M.size)] for a in range(M.size)]
    names = [M.names[inv[a]] for a in range(M.size)]
    return FiniteMonoid(M.size, add, order, perm[M.zero_index], names, name=name)


def random_table(seed: int, max_size: int = 6) -> FiniteMonoid:
    """A seeded random valid table: a product of small factors, relabelled."""
    rng = random.Random(seed)
    factors = [chain_table(1), chain_table(2), saturating(2), saturating(3)]
    M = rng.choice(factors)
    while True:
        extra = rng.choice(factors + [None])
        if extra is None or M.size * extra.size > max_size:
            break
        M = product_monoid(M, extra)
    perm = list(range(M.size))
    rng.shuffle(perm)
    return relabel(M, perm, name=f"R{seed}")


def corpus(random_count: int = 20, seed: int = 0) -> List[FiniteMonoid]:
    """Chain monoids T0..T5, saturating N1..N7, grids up to 3x3, two-element and seeded random tables."""
    out: List[FiniteMonoid] = [chain_table(n) for n in range(6)]
    out += [saturating(c) for c in range(1, 8)]
    out += [saturating_grid(a, b) for a, b in [(1, 1), (1, 2), (2, 2)]]
    out.append(two_element())
    out += [random_table(seed + k) for k in range(random_count)]
    return out


# ==========================================
# Ideals and the brute-force completion
# ==========================================

def _is_ideal(M: FiniteMonoid, subset: frozenset) -> bool:
    o = M.order
    for a in subset:
        if any(o[b][a] and b not in subset for b in range(M.size)):
            return False
    for a, b in combinations(subset, 2):
        if not any(o[a][c] and o[b][c] for c in subset):
            return False
    return True


def enumerate_ideals(M: FiniteMonoid, cap: Optional[int] = None) -> List[frozenset]:
    """Nonempty hereditary upward-directed subsets, smallest first."""
    cap = settings.ideal_cap if cap is None else cap
    if M.size > cap:
        raise CarrierTooLarge(f"{M.family_id} has {M.size} elements, cap is {cap}")
    ideals = []
    for r in range(1, M.size + 1):
        for combo in combinations(range(M.size), r):
            subset = frozenset(combo)
            if _is_ideal(M, subset):
                ideals.append(subset)
    ideals.sort(key=lambda s: (len(s), sorted(s)))
    logger.debug("%s: %d ideals", M.family_id, len(ideals))
    return ideals


def ideal_interval(M: FiniteMonoid, ideal: frozenset) -> IntervalDesc:
    return IntervalDesc.finite_generated(M, [Element(M.family_id, i) for i in sorted(ideal)])


def _all_strict_chains(M: FiniteMonoid):
    """Every strictly increasing sequence of elements."""
    o = M.order
    stack = [[i] for i in range(M.size)]
    while stack:
        chain = stack.pop()
        yield chain
        last = chain[-1]
        for j in range(M.size):
            if j != last and o[last][j]:
                stack.append(chain + [j])


def verify_cu_object(M: FiniteMonoid) -> EvidenceReport:
    """All Cu axioms, exhaustively."""
    report = EvidenceReport(subject=f"Cu object {M.family_id}", exhaustive=True)
    elems = M.elements()
    axioms = check_order_axioms(M, elems)
    report.checks.extend(axioms.checks)

    bad = None
    for x, y in product(elems, repeat=2):
        if way_below(M, x, y).is_true != M.leq(x, y):
            bad = [M.format(x), M.format(y)]
            break
    report.add("way-below equals order", Status.FAIL if bad else Status.PASS, bad)
    bad = next((M.format(x) for x in elems if not way_below(M, x, x).is_true), None)
    report.add("every element compact", Status.FAIL if bad else Status.PASS, bad)

    # chains of length at most n + 1 cover every sequence up to repetition
    count = 0
    bad = None
    for chain in _all_strict_chains(M):
        count += 1
        last = chain[-1]
        if any(not M.order[a][last] for a in chain):
            bad = [M.names[i] for i in chain]
            break
    report.add("increasing sequences have suprema", Status.FAIL if bad else Status.PASS, bad,
               f"{count} strict chains checked")
    report.budget_spent = count

    membership = check_precu_membership(M, elems)
    report.checks.extend(membership.checks)

    for a, b in combinations(range(M.size), 2):
        uppers = [c for c in range(M.size) if M.order[a][c] and M.order[b][c]]
        least = [c for c in uppers if all(M.order[c][d] for d in uppers)]
        if uppers and not least:
            report.notes.append(
                f"{M.names[a]} and {M.names[b]} have no least upper bound; only sequence suprema are required"
            )
            break
    return report


@dataclass
class BruteForceCompletion:
    source: FiniteMonoid
    ideals: List[frozenset]
    monoid: FiniteMonoid
    # iota_index[x] is the index of the ideal generated by x
    iota_index: List[int]
    isomorphism: EvidenceReport

    def to_dict(self) -> dict:
        return {
            "source": self.source.family_id,
            "ideals": [[self.source.names[i] for i in sorted(s)] for s in self.ideals],
            "monoid": self.monoid.to_dict(),
            "iota": {self.source.names[x]: self.monoid.names[k] for x, k in enumerate(self.iota_index)},
            "isomorphism": self.isomorphism.to_dict(),
        }


def _ideal_sum(M: FiniteMonoid, a: frozenset, b: frozenset) -> frozenset:
    sums = {M.add_table[x][y] for x in a for y in b}
    return frozenset(z for z in range(M.size) if any(M.order[z][s] for s in sums))


def build_completion_bruteforce(M: FiniteMonoid, cap: Optional[int] = None) -> BruteForceCompletion:
    ideals = enumerate_ideals(M, cap)
    position = {s: k for k, s in enumerate(ideals)}
    n = len(ideals)
    add = [[position[_ideal_sum(M, a, b)] for b in ideals] for a in ideals]
    order = [[a <= b for b in ideals] for a in ideals]
    names = ["{" + ",".join(M.names[i] for i in sorted(s)) + "}" for s in ideals]
    zero = position[M.downset(M.zero_index)]
    ideal_monoid = FiniteMonoid(n, add, order, zero, names, name=f"Id({M.family_id})")
    iota_index = [position[M.downset(x)] for x in range(M.size)]

    # compare with the interval completion on every pair of classes
    bar = completion_of(M)
    report = EvidenceReport(subject=f"ideal monoid of {M.family_id} vs interval completion", exhaustive=True)
    intervals = [Element(bar.family_id, ideal_interval(M, s)) for s in ideals]
    bad = None
    for (i, I), (j, J) in product(enumerate(intervals), repeat=2):
        if completion_leq(I, J).as_bool() != order[i][j]:
            bad = [names[i], names[j]]
            break
    report.add("order agrees with inclusion", Status.FAIL if bad else Status.PASS, bad)
    bad = None
    for (i, I), (j, J) in product(enumerate(intervals), repeat=2):
        summed = Element(bar.family_id, interval_add(I.payload, J.payload))
        if not bar.eq(summed, intervals[add[i][j]]):
            bad = [names[i], names[j]]
            break
    report.add("addition agrees with ideal sum", Status.FAIL if bad else Status.PASS, bad)
    covered = sorted(set(iota_index)) == list(range(n))
    report.add("iota onto", Status.PASS if covered else Status.FAIL,
               None if covered else [names[k] for k in range(n) if k not in iota_index])
    return BruteForceCompletion(M, ideals, ideal_monoid, iota_index, report)


def ideal_iota_map(done: BruteForceCompletion) -> MapDescriptor:
    M, Mb = done.source, done.monoid
    return MapDescriptor(
        name=f"iota_{M.family_id}",
        dom=M,
        cod=Mb,
        fn=lambda x: Element(Mb.family_id, done.iota_index[x.payload]),
        limit_map=lambda v: v,
    )


def verify_completion_def(M: FiniteMonoid, done: Optional[BruteForceCompletion] = None) -> EvidenceReport:
    """The three clauses of the completion definition for the brute-force ideal monoid."""
    done = done or build_completion_bruteforce(M)
    Mb = done.monoid
    report = EvidenceReport(subject=f"completion of {M.family_id}", exhaustive=True)

    # 1. the ideal monoid is a Cu object
    cu = verify_cu_object(Mb)
    report.add("completion is a Cu object", cu.status,
               None if cu.passed else cu.failures[0].property)

    # 2. iota is an order-embedding preserving ≪ and existing suprema
    iota = ideal_iota_map(done)
    morphism = is_precu_morphism(iota, M, Mb)
    embedding = is_order_embedding(iota, M, Mb)
    report.add("iota is a PreCu morphism", morphism.status,
               None if morphism.passed else morphism.failures[0].property)
    report.add("iota is an order-embedding", embedding.status,
               None if embedding.passed else embedding.failures[0].property)

    # 3. every class is the supremum of iota of a rapidly increasing sequence
    bad = None
    for k in range(Mb.size):
        sources = [x for x in range(M.size) if done.iota_index[x] == k]
        if not sources:
            bad = Mb.names[k]
            break
        x = Element(M.family_id, sources[0])
        image = iota.map_chain(M.approximant_chain(x))
        sup = sup_chain(Mb, image)
        if not (sup.found and sup.value.payload == k):
            bad = Mb.names[k]
            break
    report.add("every class is a sup of a rapid image sequence", Status.FAIL if bad else Status.PASS, bad)

    hereditary = is_hereditary(iota, M, Mb, Mb.elements())
    report.add("iota hereditary", hereditary.status,
               None if hereditary.passed else hereditary.failures[0].witness)
    report.budget_spent = cu.budget_spent
    return report


# ==========================================
# Maps between finite monoids
# ==========================================

def table_map(name: str, dom: FiniteMonoid, cod: FiniteMonoid, images: Sequence[int]) -> MapDescriptor:
    images = tuple(images)
    return MapDescriptor(
        name=name,
        dom=dom,
        cod=cod,
        fn=lambda x: Element(cod.family_id, images[x.payload]),
    )


def map_table(f: MapDescriptor, dom: FiniteMonoid) -> List[int]:
    return [f(x).payload for x in dom.elements()]


def support_map(dom: FiniteMonoid, cod: FiniteMonoid) -> MapDescriptor:
    """0 ↦ 0, everything else ↦ the top of the two-element chain cod."""
    top = next(i for i in range(cod.size) if i != cod.zero_index)
    images = [cod.zero_index if x == dom.zero_index else top for x in range(dom.size)]
    return table_map(f"supp_{dom.family_id}", dom, cod, images)


def map_pool() -> List[Tuple[FiniteMonoid, FiniteMonoid, MapDescriptor]]:
    """Sampled triples (M, P, alpha) with |P|^|M| within the search cap."""
    triples: List[Tuple[FiniteMonoid, FiniteMonoid, MapDescriptor]] = []
    smalls = [two_element(), chain_table(1), chain_table(2), chain_table(3), saturating(2),
              saturating(3), saturating_grid(1, 1), random_table(1), random_table(2)]
    for M in smalls:
        triples.append((M, M, identity_map(M)))
    for m, n in [(1, 2), (2, 3), (1, 3), (2, 4), (3, 4)]:
        Tm, Tn = chain_table(m), chain_table(n)
        triples.append((Tm, Tn, table_map(f"incl_{m}_{n}", Tm, Tn, list(range(m + 1)))))
    for m, n in [(3, 1), (4, 2), (3, 2)]:
        Tm, Tn = chain_table(m), chain_table(n)
        triples.append((Tm, Tn, table_map(f"trunc_{m}_{n}", Tm, Tn, [min(i, n) for i in range(m + 1)])))
    for a, b in [(3, 1), (4, 2), (5, 3)]:
        Na, Nb = saturating(a), saturating(b)
        triples.append((Na, Nb, table_map(f"sat_{a}_{b}", Na, Nb, [min(i, b) for i in range(a + 1)])))
    Z = two_element()
    for M in [chain_table(2), saturating(3), saturating_grid(1, 2), random_table(3)]:
        triples.append((M, Z, support_map(M, Z)))
    for M, P in [(chain_table(2), saturating(3)), (saturating_grid(1, 1), chain_table(2))]:
        triples.append((M, P, table_map(f"0_{M.family_id}", M, P, [P.zero_index] * M.size)))
    return triples


# ==========================================
# Universal property oracle
# ==========================================

def _cu_morphisms(Mb: FiniteMonoid, P: FiniteMonoid,
                  forced: Dict[int, int]) -> Tuple[List[Tuple[int, ...]], int]:
    """All additive, zero-preserving, order-preserving maps Mb -> P agreeing with `forced`."""
    found: List[Tuple[int, ...]] = []
    visited = 0
    beta: List[Optional[int]] = [None] * Mb.size

    def consistent(k: int) -> bool:
        for j in range(Mb.size):
            if beta[j] is None:
                continue
            if Mb.order[j][k] and not P.order[beta[j]][beta[k]]:
                return False
            if Mb.order[k][j] and not P.order[beta[k]][beta[j]]:
                return False
            s = Mb.add_table[j][k]
            if beta[s] is not None and beta[s] != P.add_table[beta[j]][beta[k]]:
                return False
        return True

    def search(k: int) -> None:
        nonlocal visited
        if k == Mb.size:
            found.append(tuple(beta))
            return
        choices = [forced[k]] if k in forced else range(P.size)
        for v in choices:
            visited += 1
            beta[k] = v
            if consistent(k):
                search(k + 1)
            beta[k] = None

    search(0)
    # additivity of pairs whose sum came earlier in the order
    checked = [b for b in found
               if all(b[Mb.add_table[i][j]] == P.add_table[b[i]][b[j]] for i in range(Mb.size) for j in range(Mb.size))
               and b[Mb.zero_index] == P.zero_index]
    return checked, visited


def brute_force_universal(M: FiniteMonoid, P: FiniteMonoid, alpha: MapDescriptor,
                          cap: Optional[int] = None) -> EvidenceReport:
    cap = settings.map_search_cap if cap is None else cap
    done = build_completion_bruteforce(M)
    Mb = done.monoid
    if P.size ** Mb.size > cap:
        raise SearchSpaceTooLarge(f"|P|^|M-bar| = {P.size}^{Mb.size} exceeds {cap}")

    report = EvidenceReport(subject=f"universal property of {alpha.name}", exhaustive=True)
    alpha_table = map_table(alpha, M)
    # beta ∘ iota = alpha pins beta on the image of iota
    forced: Dict[int, int] = {}
    clash = None
    for x, k in enumerate(done.iota_index):
        if forced.setdefault(k, alpha_table[x]) != alpha_table[x]:
            clash = M.names[x]
    if clash is not None:
        report.add("alpha factors through iota", Status.FAIL, clash)
        return report

    survivors, visited = _cu_morphisms(Mb, P, forced)
    report.budget_spent = visited
    report.add("unique extension", Status.PASS if len(survivors) == 1 else Status.FAIL,
               {"survivors": len(survivors)})
    if len(survivors) != 1:
        return report
    beta = survivors[0]

    bar = completion_of(M)
    mismatch = None
    for x in range(M.size):
        cls = bar.iota(Element(M.family_id, x))
        value = extend_universal(alpha, P, cls)
        if value.payload != beta[done.iota_index[x]]:
            mismatch = {"class": Mb.names[done.iota_index[x]], "search": P.names[beta[done.iota_index[x]]],
                        "extension": P.format(value)}
            break
    report.add("matches extend_universal", Status.FAIL if mismatch else Status.PASS, mismatch)

    if is_order_embedding(alpha, M, P).passed:
        beta_map = table_map(f"beta_{alpha.name}", Mb, P, beta)
        inherited = is_order_embedding(beta_map, Mb, P)
        report.add("embedding inherited", inherited.status,
                   None if inherited.passed else inherited.failures[0].witness)
    logger.debug("universal %s: %d survivors after %d assignments", alpha.name, len(survivors), visited)
    return report


def universal_triples(pool: Optional[Sequence[Tuple[FiniteMonoid, FiniteMonoid, MapDescriptor]]] = None
                      ) -> List[Tuple[FiniteMonoid, FiniteMonoid, MapDescriptor]]:
    """Triples of the pool whose map is a verified PreCu morphism."""
    pool = map_pool() if pool is None else pool
    return [(M, P, f) for M, P, f in pool if is_precu_morphism(f, M, P).passed]

"""
Limit values and way-below contents ("cuts").

A chain carries a declared limit of its base values. Catalog families whose
elements sit over a linearly ordered base (ℕ, ℚ⁺, dyadics, chain monoids,
doubled copies) describe the way-below content of an interval as a `Cut`:

    {z : base(z) < value} ∪ {z : base(z) == value and tag(z) in tags}

Comparing two intervals under ≼ is then inclusion of cuts. Finite carriers use
`SetCut`, plain down-sets of indices.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

INF = math.inf


@dataclass(frozen=True, eq=False)
class IrrationalLimit:
    """A limit known through increasing rational lower approximations and a rational upper bound."""

    lower: Callable[[int], Fraction]
    upper: Fraction
    label: str = ""
    # False for sums of irrational limits, which may land exactly on a rational
    surely_irrational: bool = True

    def __repr__(self) -> str:
        return f"IrrationalLimit({self.label or '?'} < {self.upper})"


LimitValue = Union[int, Fraction, float, IrrationalLimit]


def is_exact(value) -> bool:
    return not isinstance(value, IrrationalLimit)


def format_limit(value) -> str:
    if value is None:
        return "undeclared"
    if isinstance(value, tuple):
        return "(" + ", ".join(format_limit(v) for v in value) + ")"
    if isinstance(value, IrrationalLimit):
        return value.label or f"irrational<{value.upper}"
    if value == INF:
        return "inf"
    return str(value)


def add_limits(a, b):
    if a is None or b is None:
        return None
    if isinstance(a, tuple):
        return tuple(add_limits(x, y) for x, y in zip(a, b))
    if a == INF or b == INF:
        return INF
    if is_exact(a) and is_exact(b):
        return a + b
    if is_exact(a):
        a, b = b, a
    if is_exact(b):
        return IrrationalLimit(
            lower=lambda n, a=a, b=b: a.lower(n) + b,
            upper=a.upper + b,
            label=f"{a.label}+{b}",
            surely_irrational=a.surely_irrational,
        )
    return IrrationalLimit(
        lower=lambda n, a=a, b=b: a.lower(n) + b.lower(n),
        upper=a.upper + b.upper,
        label=f"{a.label}+{b.label}",
        surely_irrational=False,
    )


def compare_limits(a, b, budget: int) -> Optional[int]:
    """Three-way comparison (-1, 0, 1), or None when the budget cannot separate them."""
    if is_exact(a) and is_exact(b):
        return (a > b) - (a < b)
    if not is_exact(a) and is_exact(b):
        flipped = compare_limits(b, a, budget)
        return None if flipped is None else -flipped
    # here a is exact and b is irrational
    if is_exact(a):
        if a == INF:
            return 1
        if b.upper < a or (b.upper == a and b.surely_irrational):
            return 1
        for n in range(budget):
            if b.lower(n) > a:
                return -1
        return None
    for n in range(budget):
        if a.upper < b.lower(n):
            return -1
        if b.upper < a.lower(n):
            return 1
    return None


@dataclass(frozen=True)
class Cut:
    value: LimitValue
    tags: frozenset = frozenset()

    @property
    def closed(self) -> bool:
        return bool(self.tags)

    def le(self, other: "Cut", budget: int) -> Optional[bool]:
        c = compare_limits(self.value, other.value, budget)
        if c is None:
            return None
        if c != 0:
            return c < 0
        return self.tags <= other.tags

    def union(self, other: "Cut", budget: int) -> Optional["Cut"]:
        c = compare_limits(self.value, other.value, budget)
        if c is None:
            return None
        if c < 0:
            return other
        if c > 0:
            return self
        return Cut(self.value, self.tags | other.tags)

    def key(self) -> str:
        tags = ",".join(sorted(t or "*" for t in self.tags))
        return f"{format_limit(self.value)}[{tags}]" if tags else f"{format_limit(self.value)})"


@dataclass(frozen=True)
class SetCut:
    members: frozenset

    @property
    def closed(self) -> bool:
        return True

    def le(self, other: "SetCut", budget: int) -> Optional[bool]:
        return self.members <= other.members

    def union(self, other: "SetCut", budget: int) -> "SetCut":
        return SetCut(self.members | other.members)

    def key(self) -> str:
        return "{" + ",".join(str(m) for m in sorted(self.members)) + "}"


@dataclass(frozen=True)
class BoxCut:
    """Down-set {z : z <= bounds coordinatewise} of an all-compact product family; inf means unbounded."""

    bounds: tuple

    @property
    def closed(self) -> bool:
        return all(b != INF for b in self.bounds)

    def le(self, other: "BoxCut", budget: int) -> Optional[bool]:
        return all(a <= b for a, b in zip(self.bounds, other.bounds))

    def union(self, other: "BoxCut", budget: int) -> "BoxCut":
        return BoxCut(tuple(max(a, b) for a, b in zip(self.bounds, other.bounds)))

    def key(self) -> str:
        return format_limit(self.bounds)

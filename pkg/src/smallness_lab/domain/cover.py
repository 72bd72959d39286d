"""Cover parts, covers and cost reports."""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Iterable, Optional, Sequence, Tuple

from .constants import STAR_FOREST_ENUMERATION_CAP
from .errors import ConfigurationError
from .graph import WeightedGraph
from .interfaces import CoverPart
from .stars import SpecialStarSearch, StarForest, elementary_symmetric
from .subsets import Subset, is_subset


class CostMethod(str, Enum):
    """How a cost figure was obtained."""

    ENUMERATION = "enumeration"
    CLOSED_FORM = "closed-form"
    SYMMETRIC_DP = "symmetric-DP"
    ANALYTIC_BOUND = "analytic-bound"


@dataclass(frozen=True)
class CostReport:
    """Exact cost when known, and an upper bound that always holds."""

    upper_bound: Fraction
    method: CostMethod
    exact: Optional[Fraction] = None

    def __post_init__(self) -> None:
        if self.exact is not None and self.exact > self.upper_bound:
            raise ValueError(f"exact cost {self.exact} above upper bound {self.upper_bound}")

    @classmethod
    def exactly(cls, value: Fraction, method: CostMethod) -> "CostReport":
        return cls(upper_bound=value, method=method, exact=value)

    @property
    def best(self) -> Fraction:
        return self.exact if self.exact is not None else self.upper_bound


# Strongest first.
_METHOD_ORDER = (
    CostMethod.ENUMERATION,
    CostMethod.CLOSED_FORM,
    CostMethod.SYMMETRIC_DP,
    CostMethod.ANALYTIC_BOUND,
)


def weakest_method(methods: Iterable[CostMethod]) -> CostMethod:
    return max(methods, key=_METHOD_ORDER.index, default=CostMethod.ENUMERATION)


def total_cost(reports: Iterable[CostReport]) -> CostReport:
    """Sum of reports, labelled with the weakest summand method; exact only when all are."""
    reports = list(reports)
    upper = sum((r.upper_bound for r in reports), Fraction(0))
    method = weakest_method(r.method for r in reports)
    if all(r.exact is not None for r in reports):
        exact = sum((r.exact for r in reports if r.exact is not None), Fraction(0))
        return CostReport(upper_bound=upper, method=method, exact=exact)
    return CostReport(upper_bound=upper, method=method)


@dataclass(frozen=True)
class ExplicitList:
    """An explicit list of subsets."""

    subsets: Tuple[Subset, ...] = field(default_factory=tuple)
    kind: str = field(default="explicit", init=False)

    def __post_init__(self) -> None:
        if len(set(self.subsets)) != len(self.subsets):
            raise ConfigurationError("explicit cover part contains duplicate subsets")

    def cost(self, p: Fraction) -> CostReport:
        value = sum((p ** s.bit_count() for s in self.subsets), Fraction(0))
        return CostReport.exactly(value, CostMethod.ENUMERATION)

    def find_member_inside(self, u: Subset) -> Optional[Subset]:
        for s in self.subsets:
            if is_subset(s, u):
                return s
        return None

    def is_member(self, w: Subset) -> bool:
        return w in self.subsets


@dataclass(frozen=True)
class PrefixBinomial:
    """⋃_{1≤k≤kmax} binom(first min(a·k, m) vertices of order, k), m = len(order)."""

    order: Tuple[int, ...]
    a: int
    kmax: int
    kind: str = field(default="prefix-binomial", init=False)

    def __post_init__(self) -> None:
        if self.a < 1:
            raise ConfigurationError("prefix-binomial requires a >= 1", a=self.a)
        if len(set(self.order)) != len(self.order):
            raise ConfigurationError("prefix-binomial order repeats a vertex")
        if not 0 <= self.kmax <= len(self.order):
            raise ConfigurationError("kmax must lie in [0, len(order)]", kmax=self.kmax)

    def prefix_length(self, k: int) -> int:
        return min(self.a * k, len(self.order))

    def cost(self, p: Fraction) -> CostReport:
        value = sum(
            (comb(self.prefix_length(k), k) * p**k for k in range(1, self.kmax + 1)),
            Fraction(0),
        )
        return CostReport.exactly(value, CostMethod.CLOSED_FORM)

    def witness_k(self, u: Subset) -> Optional[int]:
        """Smallest k with |u ∩ first a·k vertices| >= k."""
        hits = 0
        scanned = 0
        for k in range(1, self.kmax + 1):
            limit = self.prefix_length(k)
            while scanned < limit:
                if u >> self.order[scanned] & 1:
                    hits += 1
                scanned += 1
            if hits >= k:
                return k
        return None

    def find_member_inside(self, u: Subset) -> Optional[Subset]:
        k = self.witness_k(u)
        if k is None:
            return None
        member = 0
        taken = 0
        for v in self.order[: self.prefix_length(k)]:
            if u >> v & 1:
                member |= 1 << v
                taken += 1
                if taken == k:
                    break
        return member

    def is_member(self, w: Subset) -> bool:
        k = w.bit_count()
        if not 1 <= k <= self.kmax:
            return False
        prefix = 0
        for v in self.order[: self.prefix_length(k)]:
            prefix |= 1 << v
        return is_subset(w, prefix)


@dataclass(frozen=True)
class StarForestFamily:
    """γ(b, L): vertex-disjoint unions of b L-special stars of graph (never materialized)."""

    graph: WeightedGraph
    b: int
    L: int
    J: Fraction
    p: Fraction
    kind: str = field(default="star-forest", init=False)

    def __post_init__(self) -> None:
        if self.b < 1 or self.L < 1:
            raise ConfigurationError("star-forest family requires b >= 1 and L >= 1")

    @property
    def search(self) -> SpecialStarSearch:
        return SpecialStarSearch(self.graph, self.b, self.L, self.J, self.p)

    def star_costs(self, p: Fraction) -> Tuple[Fraction, ...]:
        """Exact cost of all L-special stars at each vertex: binom(d_v, L^v)·p^(1+L^v)."""
        search = self.search
        return tuple(
            comb(self.graph.degrees[v], search.sizes[v]) * p ** (1 + search.sizes[v])
            for v in range(self.graph.n)
        )

    def enumerated_cost(self, p: Fraction) -> Fraction:
        return sum((p ** w.bit_count() for w in self.search.member_masks()), Fraction(0))

    def cost(self, p: Fraction) -> CostReport:
        dp_bound = elementary_symmetric(self.star_costs(p), self.b)
        if self.graph.n <= STAR_FOREST_ENUMERATION_CAP:
            exact = self.enumerated_cost(p)
            return CostReport(upper_bound=dp_bound, method=CostMethod.ENUMERATION, exact=exact)
        return CostReport(upper_bound=dp_bound, method=CostMethod.SYMMETRIC_DP)

    def find_forest_inside(self, u: Subset) -> Optional[StarForest]:
        return self.search.find_inside(u)

    def find_member_inside(self, u: Subset) -> Optional[Subset]:
        forest = self.find_forest_inside(u)
        return forest.mask if forest is not None else None

    def is_member(self, w: Subset) -> bool:
        return self.search.decomposes(w)


@dataclass(frozen=True)
class Cover:
    """Union of cover parts."""

    parts: Tuple[CoverPart, ...] = field(default_factory=tuple)

    @classmethod
    def of(cls, parts: Sequence[CoverPart]) -> "Cover":
        return cls(parts=tuple(parts))

    def cost(self, p: Fraction) -> CostReport:
        return total_cost(part.cost(p) for part in self.parts)

    def find_member_inside(self, u: Subset) -> Optional[Tuple[int, Subset]]:
        """(part index, member ⊆ u) from the first part that has one."""
        for index, part in enumerate(self.parts):
            member = part.find_member_inside(u)
            if member is not None:
                return index, member
        return None

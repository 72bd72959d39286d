"""Exact minimum-cost cover of a family's minimal sets by branch and bound."""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from ..domain.subsets import Subset, is_subset
from .fractional_lp import solve_exact

# Residual LP bounds are only computed when the residual has at most this many candidates.
_RESIDUAL_LP_CANDIDATES = 64


@dataclass(frozen=True)
class CoverSolution:
    cost: Fraction
    cover: Tuple[Subset, ...]
    nodes: int


class BranchAndBound:
    """Search over covers: branch on the lowest-index uncovered minimal set.

    For that set F, every candidate S ⊆ F is tried, cheapest per newly covered
    minimal set first (ties by mask). Nodes are pruned with the larger of a
    packing bound and the residual LP optimum.
    """

    def __init__(self, sets: Sequence[Subset], candidates: Sequence[Subset], p: Fraction):
        self.sets = tuple(sets)
        self.candidates = tuple(candidates)
        self.p = p
        self.costs = {s: p ** s.bit_count() for s in self.candidates}
        # covers[s]: bitmask over set indices of the minimal sets containing s
        self.covers: Dict[Subset, int] = {}
        for s in self.candidates:
            hit = 0
            for i, f in enumerate(self.sets):
                if is_subset(s, f):
                    hit |= 1 << i
            self.covers[s] = hit
        self.inside: List[Tuple[Subset, ...]] = [
            tuple(s for s in self.candidates if is_subset(s, f)) for f in self.sets
        ]
        self.best_cost: Optional[Fraction] = None
        self.best_cover: Tuple[Subset, ...] = ()
        self.nodes = 0
        self._lp_cache: Dict[int, Fraction] = {}

    def _ordered(self, options: Sequence[Subset], uncovered: int) -> List[Subset]:
        def key(s: Subset) -> Tuple[Fraction, Subset]:
            gained = (self.covers[s] & uncovered).bit_count()
            return self.costs[s] / gained, s

        return sorted(options, key=key)

    def _packing_bound(self, uncovered: int) -> Fraction:
        """Σ p^|F| over greedily chosen pairwise-disjoint uncovered minimal sets."""
        used = 0
        total = Fraction(0)
        for i, f in enumerate(self.sets):
            if uncovered >> i & 1 and not f & used:
                used |= f
                total += self.p ** f.bit_count()
        return total

    def _lp_bound(self, uncovered: int) -> Fraction:
        if uncovered in self._lp_cache:
            return self._lp_cache[uncovered]
        residual = [f for i, f in enumerate(self.sets) if uncovered >> i & 1]
        open_sets = [i for i in range(len(self.sets)) if uncovered >> i & 1]
        options = sorted({s for i in open_sets for s in self.inside[i]})
        value = Fraction(0)
        if len(options) <= _RESIDUAL_LP_CANDIDATES:
            value, _ = solve_exact(residual, options, self.p)
        self._lp_cache[uncovered] = value
        return value

    def bound(self, uncovered: int) -> Fraction:
        packing = self._packing_bound(uncovered)
        if self.best_cost is not None and packing >= self.best_cost:
            return packing
        return max(packing, self._lp_bound(uncovered))

    def greedy(self) -> None:
        """Initial incumbent: repeatedly take the best ratio candidate."""
        uncovered = (1 << len(self.sets)) - 1
        chosen: List[Subset] = []
        while uncovered:
            useful = [s for s in self.candidates if self.covers[s] & uncovered]
            s = self._ordered(useful, uncovered)[0]
            chosen.append(s)
            uncovered &= ~self.covers[s]
        self.best_cover = tuple(chosen)
        self.best_cost = sum((self.costs[s] for s in chosen), Fraction(0))

    def branch(self, uncovered: int, chosen: List[Subset], cost: Fraction) -> None:
        self.nodes += 1
        if not uncovered:
            if self.best_cost is None or cost < self.best_cost:
                self.best_cost = cost
                self.best_cover = tuple(chosen)
            return
        if self.best_cost is not None and cost + self.bound(uncovered) >= self.best_cost:
            return
        first = (uncovered & -uncovered).bit_length() - 1
        for s in self._ordered(self.inside[first], uncovered):
            chosen.append(s)
            self.branch(uncovered & ~self.covers[s], chosen, cost + self.costs[s])
            chosen.pop()

    def run(self) -> CoverSolution:
        self.greedy()
        self.branch((1 << len(self.sets)) - 1, [], Fraction(0))
        assert self.best_cost is not None
        return CoverSolution(
            cost=self.best_cost, cover=tuple(sorted(self.best_cover)), nodes=self.nodes
        )

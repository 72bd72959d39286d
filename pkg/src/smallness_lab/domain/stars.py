"""Stars, star forests and their L-special families γ(b, L)."""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, List, Optional, Sequence, Set, Tuple

from .graph import WeightedGraph
from .rationals import ceil_fraction
from .subsets import Subset, to_indices


@dataclass(frozen=True)
class Star:
    """Star (v, S): center v with leaves S ⊆ N_G(v)."""

    center: int
    leaves: Subset

    @property
    def mask(self) -> Subset:
        return self.leaves | (1 << self.center)

    @property
    def size(self) -> int:
        return self.leaves.bit_count()


@dataclass(frozen=True)
class StarForest:
    """Pairwise vertex-disjoint stars."""

    stars: Tuple[Star, ...]

    @property
    def mask(self) -> Subset:
        out = 0
        for star in self.stars:
            out |= star.mask
        return out

    def is_disjoint(self) -> bool:
        used = 0
        for star in self.stars:
            if used & star.mask:
                return False
            used |= star.mask
        return True


def good_threshold(degree: int, J: Fraction, p: Fraction) -> Fraction:
    """J·d_v·p/4; a star at v is good when it has at least this many leaves."""
    return J * degree * p / 4


def is_good(graph: WeightedGraph, v: int, leaf_count: int, J: Fraction, p: Fraction) -> bool:
    return leaf_count >= good_threshold(graph.degrees[v], J, p)


def special_size(graph: WeightedGraph, v: int, L: int, J: Fraction, p: Fraction) -> int:
    """L^v = max{L, ⌈J d_v p / 4⌉}, degrees taken in the full graph."""
    return max(L, ceil_fraction(good_threshold(graph.degrees[v], J, p)))


def is_special(graph: WeightedGraph, star: Star, L: int, J: Fraction, p: Fraction) -> bool:
    if star.leaves & ~graph.adjacency[star.center]:
        return False
    return star.size == special_size(graph, star.center, L, J, p)


def elementary_symmetric(values: Sequence[Fraction], b: int) -> Fraction:
    """e_b(values) by the standard O(n·b) dynamic program."""
    if b < 0:
        return Fraction(0)
    if b > len(values):
        return Fraction(0)
    e = [Fraction(0)] * (b + 1)
    e[0] = Fraction(1)
    for q in values:
        if q == 0:
            continue
        for j in range(b, 0, -1):
            e[j] += e[j - 1] * q
    return e[b]


class SpecialStarSearch:
    """Searches and enumerates unions of b disjoint L-special stars in a graph."""

    def __init__(self, graph: WeightedGraph, b: int, L: int, J: Fraction, p: Fraction):
        self.graph = graph
        self.b = b
        self.L = L
        self.J = J
        self.p = p
        self.sizes = tuple(special_size(graph, v, L, J, p) for v in range(graph.n))

    def _stars_at(self, v: int, available: Subset) -> Iterator[Star]:
        leaves_pool = to_indices(self.graph.adjacency[v] & available)
        k = self.sizes[v]
        if len(leaves_pool) < k:
            return
        for combo in combinations(leaves_pool, k):
            mask = 0
            for x in combo:
                mask |= 1 << x
            yield Star(center=v, leaves=mask)

    def forests_inside(self, u: Subset) -> Iterator[StarForest]:
        """All forests of b disjoint L-special stars with vertices in u, centers increasing."""
        if self.b * (1 + self.L) > u.bit_count():
            return

        def extend(start: int, used: Subset, chosen: List[Star]) -> Iterator[StarForest]:
            if len(chosen) == self.b:
                yield StarForest(stars=tuple(chosen))
                return
            for v in range(start, self.graph.n):
                if not (u >> v & 1) or used >> v & 1:
                    continue
                available = u & ~used & ~(1 << v)
                for star in self._stars_at(v, available):
                    chosen.append(star)
                    yield from extend(v + 1, used | star.mask, chosen)
                    chosen.pop()

        yield from extend(0, 0, [])

    def _greedy_inside(self, u: Subset) -> Optional[StarForest]:
        if self.b * (1 + self.L) > u.bit_count():
            return None
        used = 0
        chosen: List[Star] = []
        for v in range(self.graph.n):
            if len(chosen) == self.b:
                break
            if not (u >> v & 1) or used >> v & 1:
                continue
            pool = to_indices(self.graph.adjacency[v] & u & ~used & ~(1 << v))
            if len(pool) < self.sizes[v]:
                continue
            leaves = 0
            for x in pool[: self.sizes[v]]:
                leaves |= 1 << x
            star = Star(center=v, leaves=leaves)
            chosen.append(star)
            used |= star.mask
        if len(chosen) == self.b:
            return StarForest(stars=tuple(chosen))
        return None

    def find_inside(self, u: Subset) -> Optional[StarForest]:
        """A forest inside u: cheap greedy attempt first, then full backtracking."""
        forest = self._greedy_inside(u)
        if forest is not None:
            return forest
        return next(self.forests_inside(u), None)

    def member_masks(self) -> Set[Subset]:
        """Distinct vertex sets of γ(b, L)."""
        full = (1 << self.graph.n) - 1
        return {forest.mask for forest in self.forests_inside(full)}

    def decomposes(self, w: Subset) -> bool:
        """True iff w is exactly a union of b disjoint L-special stars."""
        return any(forest.mask == w for forest in self.forests_inside(w))

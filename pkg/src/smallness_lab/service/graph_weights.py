"""Edge-weight quantities λ(G[U]), λ(D(U)) and dyadic rounding of λ."""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, Tuple

from ..domain.constants import EXACT_MEASURE_CAP
from ..domain.errors import CapExceededError, DegenerateInstanceError, check
from ..domain.graph import WeightedGraph
from ..domain.rationals import floor_log2
from ..domain.subsets import Subset, check_subset


def induced_weight(graph: WeightedGraph, u: Subset) -> Fraction:
    """λ(G[U]): total weight of edges with both ends in u."""
    check_subset(u, graph.n)
    return sum(
        (w for mask, w in zip(graph.edge_masks, graph.weights) if mask & u == mask),
        Fraction(0),
    )


def boundary_weight(graph: WeightedGraph, u: Subset) -> Fraction:
    """λ(D(U)) = Σ_e λ_e·|e ∩ U|/2."""
    check_subset(u, graph.n)
    total = Fraction(0)
    for mask, w in zip(graph.edge_masks, graph.weights):
        total += w * (mask & u).bit_count()
    return total / 2


def theta(i: int) -> Fraction:
    return Fraction(1, 1 << i)


def dyadic_index(x: Fraction) -> int:
    """Class index i >= 1 of the largest θ_i = 2^-i not above x, for 0 < x <= 1."""
    if not 0 < x <= 1:
        raise ValueError(f"weight {x} outside (0, 1]")
    return max(1, -floor_log2(x))


@dataclass(frozen=True)
class DyadicDecomposition:
    """Classes G_i = {e : λ′(e) = θ_i}, as edge indices into the graph."""

    classes: Tuple[Tuple[int, Tuple[int, ...]], ...]

    @property
    def indices(self) -> Tuple[int, ...]:
        return tuple(i for i, _ in self.classes)

    def as_dict(self) -> Dict[int, Tuple[int, ...]]:
        return dict(self.classes)

    def class_weight(self, i: int) -> Fraction:
        """w_i = θ_i·|G_i|."""
        return theta(i) * len(self.as_dict()[i])


@dataclass(frozen=True)
class DyadicRounding:
    """Result of scaling λ to max weight 1 and rounding down to powers of two."""

    original: WeightedGraph
    scale: Fraction
    scaled: WeightedGraph
    rounded: WeightedGraph
    decomposition: DyadicDecomposition

    @cached_property
    def class_graphs(self) -> Dict[int, WeightedGraph]:
        """G_i with unit weights, on the full vertex set."""
        out = {}
        for i, edge_ids in self.decomposition.classes:
            sub = self.original.edge_subgraph(edge_ids)
            out[i] = sub.with_weights([Fraction(1)] * len(sub))
        return out


def round_down_dyadic(graph: WeightedGraph) -> DyadicRounding:
    """Scale λ by 1/max λ, then map each positive weight to the largest θ_i below it.

    Zero-weight edges stay in the graph with weight 0 and belong to no class.
    """
    peak = max(graph.weights, default=Fraction(0))
    if peak <= 0:
        raise DegenerateInstanceError("all edge weights are zero")
    scale = 1 / peak
    scaled_weights = [w * scale for w in graph.weights]
    rounded_weights = []
    classes: Dict[int, list] = {}
    for index, x in enumerate(scaled_weights):
        if x == 0:
            rounded_weights.append(Fraction(0))
            continue
        i = dyadic_index(x)
        rounded = theta(i)
        # λ′ <= λ_scaled <= 2λ′, strict on the right below 1
        check(rounded <= x <= 2 * rounded, "dyadic-rounding", edge=index, weight=str(x))
        check(x == 1 or x < 2 * rounded, "dyadic-rounding-strict", edge=index, weight=str(x))
        rounded_weights.append(rounded)
        classes.setdefault(i, []).append(index)
    decomposition = DyadicDecomposition(
        classes=tuple((i, tuple(ids)) for i, ids in sorted(classes.items()))
    )
    rounded = graph.with_weights(rounded_weights)
    check(
        sum((decomposition.class_weight(i) for i in decomposition.indices), Fraction(0))
        == rounded.total_weight,
        "dyadic-partition",
    )
    return DyadicRounding(
        original=graph,
        scale=scale,
        scaled=graph.with_weights(scaled_weights),
        rounded=rounded,
        decomposition=decomposition,
    )


def partition_weight(rounding: DyadicRounding, edge_ids: Iterable[int]) -> Fraction:
    """Σ_i θ_i·|G_i ∩ H| for an edge subset H given by indices."""
    wanted = set(edge_ids)
    return sum(
        (theta(i) * len(wanted.intersection(ids)) for i, ids in rounding.decomposition.classes),
        Fraction(0),
    )


def expected_weights(
    graph: WeightedGraph, p: Fraction, cap: int = EXACT_MEASURE_CAP
) -> Tuple[Fraction, Fraction]:
    """(E λ(G[V_p]), E λ(D(V_p))) by exact enumeration of all vertex subsets."""
    if graph.n > cap:
        raise CapExceededError(f"enumeration needs n <= {cap}, got {graph.n}", n=graph.n, cap=cap)
    induced = Fraction(0)
    boundary = Fraction(0)
    q = 1 - p
    for u in range(1 << graph.n):
        k = u.bit_count()
        weight = p**k * q ** (graph.n - k)
        if weight == 0:
            continue
        induced += weight * induced_weight(graph, u)
        boundary += weight * boundary_weight(graph, u)
    return induced, boundary

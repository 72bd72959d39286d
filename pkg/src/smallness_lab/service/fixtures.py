"""Built-in instances: small graphs, random families and instances, and the tightness examples."""

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Dict, Iterable, List, Optional, Sequence

import networkx as nx
import numpy as np

from ..domain.constants import E_UPPER
from ..domain.errors import ConfigurationError
from ..domain.family import IncreasingFamily, family_from_predicate
from ..domain.graph import WeightedGraph
from ..domain.subsets import Subset, check_ground_set
from .singleton_cover import SingletonInstance
from .star_forest import Tr2Instance, Tr2Target


def from_networkx(graph: nx.Graph, weights: Optional[Sequence[Fraction]] = None) -> WeightedGraph:
    """Relabel nodes to 0..n-1 (sorted order) and keep edges in sorted order."""
    relabeled = nx.convert_node_labels_to_integers(graph, ordering="sorted")
    edges = sorted((min(u, v), max(u, v)) for u, v in relabeled.edges())
    if weights is None:
        return WeightedGraph.unweighted(relabeled.number_of_nodes(), edges)
    if len(weights) != len(edges):
        raise ConfigurationError("one weight per edge required")
    return WeightedGraph(n=relabeled.number_of_nodes(), edges=tuple(edges), weights=tuple(weights))


def path_graph(n: int) -> WeightedGraph:
    return from_networkx(nx.path_graph(n))


def star_graph(m: int) -> WeightedGraph:
    """K_{1,m} with center 0."""
    return from_networkx(nx.star_graph(m))


def clique_union(sizes: Iterable[int]) -> WeightedGraph:
    return from_networkx(nx.disjoint_union_all([nx.complete_graph(k) for k in sizes]))


def star_union(copies: int, m: int) -> WeightedGraph:
    """Disjoint copies of K_{1,m}; copy j has center j·(m+1)."""
    return from_networkx(nx.disjoint_union_all([nx.star_graph(m) for _ in range(copies)]))


def random_graph(n: int, edge_probability: float, seed: int) -> WeightedGraph:
    return from_networkx(nx.gnp_random_graph(n, edge_probability, seed=seed))


def random_weighted_graph(
    n: int, edge_probability: float, seed: int, max_denominator: int = 16
) -> WeightedGraph:
    """G(n, q) with rational weights k/d, 1 <= k <= d <= max_denominator; at least one edge."""
    rng = np.random.default_rng(seed)
    graph = nx.gnp_random_graph(n, edge_probability, seed=seed)
    if graph.number_of_edges() == 0:
        graph.add_edge(0, 1)
    weights = []
    for _ in range(graph.number_of_edges()):
        den = int(rng.integers(1, max_denominator + 1))
        weights.append(Fraction(int(rng.integers(1, den + 1)), den))
    return from_networkx(graph, weights)


def random_family(n: int, rng: np.random.Generator) -> IncreasingFamily:
    """Up-set of 1..2n random nonempty subsets of [n]."""
    check_ground_set(n)
    count = int(rng.integers(1, 2 * n + 1))
    sets = [int(rng.integers(1, 1 << n)) for _ in range(count)]
    return IncreasingFamily(n=n, minimal_sets=tuple(sets))


def random_singleton_instance(rng: np.random.Generator, max_n: int = 16) -> SingletonInstance:
    """Rational ζ on 1..max_n vertices, J ∈ [6, 64], p with Jp <= 1."""
    n = int(rng.integers(1, max_n + 1))
    zeta = [Fraction(int(rng.integers(0, 11)), int(rng.integers(1, 11))) for _ in range(n)]
    if not any(zeta):
        zeta[int(rng.integers(0, n))] = Fraction(1)
    J = Fraction(int(rng.integers(6 * 4, 64 * 4 + 1)), 4)
    floor_J = J.numerator // J.denominator
    p = Fraction(1, int(rng.integers(floor_J + 1, 4 * (floor_J + 1) + 1)))
    return SingletonInstance.of(zeta, p, J)


def tr2_instance_at_guard(graph: WeightedGraph, J: Fraction, T0: int) -> Tr2Instance:
    """μ = T₀/(64eJ) so that c₀ = 64e/J exactly, and the largest p = 1/q with |G|p² <= μ."""
    mu = Fraction(T0) / (64 * E_UPPER * J)
    edges = max(len(graph), 1)
    q = isqrt(int(edges / mu)) + 1
    while edges * Fraction(1, q) ** 2 > mu:
        q += 1
    return Tr2Instance(graph=graph, p=Fraction(1, q), J=J, mu=mu, T=Fraction(T0))


@dataclass(frozen=True)
class NecessityFixture:
    """(Kp)^-1 disjoint copies of K_{1,m} with T = mp = Kμ.

    Without the D_G(U) condition, {U : |G[U]| >= T} costs at least 1/K to cover,
    however large m is.
    """

    K: Fraction
    p: Fraction
    m: int
    graph: WeightedGraph

    @property
    def copies(self) -> int:
        return int(1 / (self.K * self.p))

    @property
    def T(self) -> Fraction:
        return self.m * self.p

    @property
    def mu(self) -> Fraction:
        return len(self.graph) * self.p**2

    @property
    def lower_bound(self) -> Fraction:
        return 1 / self.K

    def family(self, J: Optional[Fraction] = None) -> IncreasingFamily:
        """Up-set of {U : |G[U]| >= T}, or of the D-conditioned target with J."""
        if J is None:
            graph = self.graph
            return family_from_predicate(lambda u: graph.induced_edge_count(u) >= self.T, graph.n)
        target = Tr2Target(graph=self.graph, J=J, p=self.p, T=self.T)
        return family_from_predicate(target, self.graph.n)

    def centers(self) -> List[Subset]:
        return [1 << (j * (self.m + 1)) for j in range(self.copies)]


def necessity_fixture(
    K: Fraction = Fraction(2), p: Fraction = Fraction(1, 4), m: int = 4
) -> NecessityFixture:
    if K <= 0 or not 0 < p <= 1:
        raise ConfigurationError("need K > 0 and 0 < p <= 1")
    copies = 1 / (K * p)
    T = m * p
    if copies.denominator != 1 or T.denominator != 1 or T < 1:
        raise ConfigurationError(
            "(Kp)^-1 and mp must be positive integers", K=str(K), p=str(p), m=m
        )
    return NecessityFixture(K=K, p=p, m=m, graph=star_union(int(copies), m))


@dataclass(frozen=True)
class SingletonOptimalityFixture:
    """|V| = J, p = J^-2, ζ ≡ 1.

    Every nonempty U is a target, and the cheapest cover costs J·p = 1/J.
    """

    J: int

    @property
    def instance(self) -> SingletonInstance:
        ones = [Fraction(1)] * self.J
        return SingletonInstance.of(ones, Fraction(1, self.J**2), Fraction(self.J))

    @property
    def optimum(self) -> Fraction:
        return Fraction(1, self.J)

    def family(self) -> IncreasingFamily:
        return IncreasingFamily(n=self.J, minimal_sets=tuple(1 << v for v in range(self.J)))


def small_graph_battery() -> Dict[str, WeightedGraph]:
    """Paths, stars and unions of cliques on at most 12 vertices, by name."""
    return {
        "path-6": path_graph(6),
        "path-12": path_graph(12),
        "star-7": star_graph(7),
        "star-11": star_graph(11),
        "cliques-4-4": clique_union([4, 4]),
        "cliques-3-4-5": clique_union([3, 4, 5]),
        "cliques-6-6": clique_union([6, 6]),
    }

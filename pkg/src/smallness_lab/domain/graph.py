"""Simple graphs with nonnegative rational edge weights."""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence, Tuple

from .errors import ConfigurationError
from .subsets import Subset, check_ground_set, check_subset

Edge = Tuple[int, int]


@dataclass(frozen=True)
class WeightedGraph:
    """Graph on vertices 0..n-1; edges are stored as (u, v) with u < v."""

    n: int
    edges: Tuple[Edge, ...] = field(default_factory=tuple)
    weights: Tuple[Fraction, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        check_ground_set(self.n)
        if len(self.weights) != len(self.edges):
            raise ConfigurationError("edges and weights differ in length")
        normalized = []
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ConfigurationError(f"loop at vertex {u}", vertex=u)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ConfigurationError(f"edge ({u}, {v}) outside vertex set", edge=[u, v])
            e = (min(u, v), max(u, v))
            if e in seen:
                raise ConfigurationError(f"duplicate edge {e}", edge=list(e))
            seen.add(e)
            normalized.append(e)
        for w in self.weights:
            if w < 0:
                raise ConfigurationError(f"negative weight {w}", weight=str(w))
        object.__setattr__(self, "edges", tuple(normalized))
        object.__setattr__(self, "weights", tuple(Fraction(w) for w in self.weights))

    @classmethod
    def unweighted(cls, n: int, edges: Iterable[Edge]) -> "WeightedGraph":
        edge_list = tuple(edges)
        return cls(n=n, edges=edge_list, weights=tuple(Fraction(1) for _ in edge_list))

    @cached_property
    def edge_masks(self) -> Tuple[Subset, ...]:
        return tuple((1 << u) | (1 << v) for u, v in self.edges)

    @cached_property
    def adjacency(self) -> Tuple[Subset, ...]:
        """Neighborhood mask N_G(v) for every vertex."""
        adj = [0] * self.n
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return tuple(adj)

    @cached_property
    def degrees(self) -> Tuple[int, ...]:
        """Unweighted degrees d_v = |∇_v| in the full graph."""
        return tuple(mask.bit_count() for mask in self.adjacency)

    @cached_property
    def total_weight(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    @cached_property
    def weighted_degrees(self) -> Tuple[Fraction, ...]:
        """λ(∇_v) for every vertex."""
        out = [Fraction(0)] * self.n
        for (u, v), w in zip(self.edges, self.weights):
            out[u] += w
            out[v] += w
        return tuple(out)

    def __len__(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> Subset:
        return self.adjacency[v]

    def induced_edge_count(self, u: Subset) -> int:
        """|G[U]|."""
        check_subset(u, self.n)
        return sum(1 for mask in self.edge_masks if mask & u == mask)

    def boundary_size(self, u: Subset) -> Fraction:
        """|D_G(U)| = ½ Σ_{v∈U} d_v."""
        check_subset(u, self.n)
        total = sum(d for v, d in enumerate(self.degrees) if u >> v & 1)
        return Fraction(total, 2)

    def edge_subgraph(
        self, indices: Sequence[int], weights: Optional[Sequence[Fraction]] = None
    ) -> "WeightedGraph":
        """Graph on the same vertex set keeping only the given edges."""
        kept = tuple(self.edges[i] for i in indices)
        if weights is None:
            weights = [self.weights[i] for i in indices]
        kept_weights = tuple(weights)
        return WeightedGraph(n=self.n, edges=kept, weights=kept_weights)

    def with_weights(self, weights: Sequence[Fraction]) -> "WeightedGraph":
        return WeightedGraph(n=self.n, edges=self.edges, weights=tuple(weights))

"""Increasing families given by their minimal sets."""

from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Tuple

from .errors import ImproperFamilyError
from .subsets import (
    Subset,
    antichain,
    check_ground_set,
    check_subset,
    from_indices,
    is_subset,
)


@dataclass(frozen=True)
class IncreasingFamily:
    """The up-set ⟨minimal_sets⟩ over the ground set [n].

    Construction normalizes ``minimal_sets`` to an antichain and rejects the
    improper families 2^V (∅ generates everything) and ∅ (no generator).
    """

    n: int
    minimal_sets: Tuple[Subset, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        check_ground_set(self.n)
        for s in self.minimal_sets:
            check_subset(s, self.n)
        normalized = tuple(antichain(self.minimal_sets))
        if not normalized:
            raise ImproperFamilyError("family has no minimal set (it is empty)")
        if normalized[0] == 0:
            raise ImproperFamilyError("family contains the empty set (it is 2^V)")
        object.__setattr__(self, "minimal_sets", normalized)

    @classmethod
    def from_index_lists(cls, n: int, sets: Iterable[Iterable[int]]) -> "IncreasingFamily":
        return cls(n=n, minimal_sets=tuple(from_indices(s, n) for s in sets))

    def contains(self, u: Subset) -> bool:
        """Membership in ⟨minimal_sets⟩."""
        check_subset(u, self.n)
        return any(is_subset(m, u) for m in self.minimal_sets)

    def __contains__(self, u: Subset) -> bool:
        return self.contains(u)

    @property
    def max_minimal_size(self) -> int:
        return max(m.bit_count() for m in self.minimal_sets)


def minimal_members(predicate: Callable[[Subset], bool], n: int) -> List[Subset]:
    """Inclusion-minimal subsets of [n] satisfying predicate.

    A collection covers {U : predicate(U)} iff it covers these minimal members,
    whether or not the predicate is increasing.
    """
    check_ground_set(n)
    return antichain(u for u in range(1 << n) if predicate(u))


def family_from_predicate(predicate: Callable[[Subset], bool], n: int) -> IncreasingFamily:
    return IncreasingFamily(n=n, minimal_sets=tuple(minimal_members(predicate, n)))

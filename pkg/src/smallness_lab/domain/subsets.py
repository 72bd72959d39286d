"""Bitmask subsets of a ground set [n] = {0, ..., n-1}.

A subset is a plain ``int``; bit v is set iff vertex v belongs to it. Lexicographic
order of subsets means increasing integer order of the masks.
"""

from itertools import combinations
from typing import Iterable, Iterator, List, Sequence

from .constants import MAX_GROUND_SET
from .errors import GroundSetError

Subset = int


def check_ground_set(n: int) -> None:
    """Reject ground sets outside 0 <= n <= 64."""
    if n < 0 or n > MAX_GROUND_SET:
        raise GroundSetError(f"ground set size {n} outside [0, {MAX_GROUND_SET}]", n=n)


def full_set(n: int) -> Subset:
    return (1 << n) - 1


def check_subset(u: Subset, n: int) -> Subset:
    """Return u after checking that only bits below n are set."""
    if u < 0 or u >> n:
        raise GroundSetError(f"subset {u:#x} not over ground set of size {n}", subset=u, n=n)
    return u


def from_indices(indices: Iterable[int], n: int) -> Subset:
    mask = 0
    for v in indices:
        if v < 0 or v >= n:
            raise GroundSetError(f"vertex {v} outside ground set of size {n}", vertex=v, n=n)
        mask |= 1 << v
    return mask


def to_indices(u: Subset) -> List[int]:
    out = []
    v = 0
    while u:
        if u & 1:
            out.append(v)
        u >>= 1
        v += 1
    return out


def size(u: Subset) -> int:
    return u.bit_count()


def is_subset(a: Subset, b: Subset) -> bool:
    """True iff a ⊆ b."""
    return a & ~b == 0


def subsets_of(mask: Subset) -> Iterator[Subset]:
    """All subsets of mask, including the empty set and mask itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def nonempty_subsets_of(mask: Subset) -> Iterator[Subset]:
    for sub in subsets_of(mask):
        if sub:
            yield sub


def k_subsets(elements: Sequence[int], k: int) -> Iterator[Subset]:
    for combo in combinations(elements, k):
        mask = 0
        for v in combo:
            mask |= 1 << v
        yield mask


def antichain(sets: Iterable[Subset]) -> List[Subset]:
    """Inclusion-minimal members of sets, deduplicated, sorted by (size, mask)."""
    unique = sorted(set(sets), key=lambda s: (s.bit_count(), s))
    kept: List[Subset] = []
    for s in unique:
        if not any(is_subset(m, s) for m in kept):
            kept.append(s)
    return kept


def format_subset(u: Subset) -> str:
    return "{" + ",".join(str(v) for v in to_indices(u)) + "}"

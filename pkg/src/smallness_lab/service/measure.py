"""Product measure μ_p of increasing families and the threshold p_c."""

from dataclasses import dataclass
from fractions import Fraction
from math import sqrt
from typing import Optional, Tuple

import numpy as np

from ..domain.constants import DEFAULT_BISECTION_TOL, EXACT_MEASURE_CAP
from ..domain.errors import CapExceededError
from ..domain.family import IncreasingFamily
from ..domain.rationals import Interval, bisect_threshold
from ..domain.subsets import Subset, to_indices

HALF = Fraction(1, 2)
_CHUNK_BITS = 20
_SAMPLE_CHUNK = 1 << 16


def _popcounts(masks: np.ndarray, n: int) -> np.ndarray:
    counts = np.zeros(masks.shape, dtype=np.int64)
    for v in range(n):
        counts += (masks >> v) & 1
    return counts


def size_profile(
    family: IncreasingFamily, cap: int = EXACT_MEASURE_CAP, required: Subset = 0
) -> Tuple[int, ...]:
    """counts[k] = number of k-element members containing required, by full enumeration."""
    n = family.n
    if n > cap:
        raise CapExceededError(f"exact measure needs n <= {cap}, got {n}", n=n, cap=cap)
    counts = np.zeros(n + 1, dtype=np.int64)
    chunk = 1 << min(n, _CHUNK_BITS)
    minimal = np.array(family.minimal_sets, dtype=np.int64)
    for start in range(0, 1 << n, chunk):
        masks = np.arange(start, start + chunk, dtype=np.int64)
        member = np.zeros(chunk, dtype=bool)
        keep = (masks & required) == required
        for m in minimal:
            member |= (masks & m) == m
        counts += np.bincount(_popcounts(masks[member & keep], n), minlength=n + 1)
    return tuple(int(c) for c in counts)


@dataclass(frozen=True)
class MeasureProfile:
    """Size profile of a family; evaluates μ_p(F) exactly for any rational p."""

    n: int
    counts: Tuple[int, ...]

    @classmethod
    def of(
        cls, family: IncreasingFamily, cap: int = EXACT_MEASURE_CAP, required: Subset = 0
    ) -> "MeasureProfile":
        return cls(n=family.n, counts=size_profile(family, cap, required))

    def mu(self, p: Fraction) -> Fraction:
        q = 1 - p
        return sum(
            (c * p**k * q ** (self.n - k) for k, c in enumerate(self.counts) if c),
            Fraction(0),
        )


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    samples: int
    hits: int

    @property
    def standard_error(self) -> float:
        return sqrt(self.mean * (1 - self.mean) / self.samples) if self.samples else 0.0


def mu_p_exact(family: IncreasingFamily, p: Fraction, cap: int = EXACT_MEASURE_CAP) -> Fraction:
    """Exact μ_p(F) = Σ_{S∈F} p^|S|(1-p)^(n-|S|)."""
    return MeasureProfile.of(family, cap).mu(p)


def mu_p_montecarlo(
    family: IncreasingFamily, p: Fraction, seed: int, samples: int
) -> MonteCarloEstimate:
    """Sample mean of the membership indicator over μ_p-random subsets."""
    if samples <= 0:
        raise ValueError("samples must be positive")
    rng = np.random.default_rng(seed)
    columns = [to_indices(m) for m in family.minimal_sets]
    threshold = float(p)
    hits = 0
    remaining = samples
    while remaining:
        batch = min(remaining, _SAMPLE_CHUNK)
        draws = rng.random((batch, family.n)) < threshold
        member = np.zeros(batch, dtype=bool)
        for idx in columns:
            member |= draws[:, idx].all(axis=1)
        hits += int(member.sum())
        remaining -= batch
    return MonteCarloEstimate(mean=hits / samples, samples=samples, hits=hits)


def mu_p(
    family: IncreasingFamily,
    p: Fraction,
    mode: str = "exact",
    seed: Optional[int] = None,
    samples: int = 100_000,
) -> "Fraction | MonteCarloEstimate":
    if mode == "exact":
        return mu_p_exact(family, p)
    if mode == "montecarlo":
        if seed is None:
            raise ValueError("montecarlo mode needs an explicit seed")
        return mu_p_montecarlo(family, p, seed, samples)
    raise ValueError(f"unknown measure mode {mode!r}")


def p_c(family: IncreasingFamily, tol: Fraction = DEFAULT_BISECTION_TOL) -> Interval:
    """Bracket [lo, hi] of the p with μ_p(F) = 1/2; μ_lo <= 1/2 <= μ_hi."""
    profile = MeasureProfile.of(family)

    def below_half(p: Fraction) -> Tuple[bool, None]:
        return profile.mu(p) <= HALF, None

    interval, _ = bisect_threshold(below_half, tol)
    return interval

"""Coverage verification and smallness checks for covers."""

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from ..domain.certificates import HALF
from ..domain.constants import COVERAGE_CAP
from ..domain.cover import Cover, CostReport
from ..domain.errors import CapExceededError
from ..domain.family import IncreasingFamily
from ..domain.interfaces import CoverPart, Logger, SubsetPredicate
from ..domain.subsets import Subset, check_ground_set, format_subset, is_subset
from ..infra.parallel import Checker, sweep


@dataclass(frozen=True)
class FamilyTarget:
    """Members of an increasing family."""

    family: IncreasingFamily

    def __call__(self, u: Subset) -> bool:
        return self.family.contains(u)


@dataclass(frozen=True)
class MinSizeTarget:
    """Subsets with at least k elements."""

    k: int

    def __call__(self, u: Subset) -> bool:
        return u.bit_count() >= self.k


@dataclass(frozen=True)
class CoverageChecker:
    """Per-subset check: None off target, else whether the cover has a member inside u.

    With replay on, every witness is re-checked by the owning part's membership test.
    """

    cover: Cover
    target: SubsetPredicate
    replay: bool = True

    def __call__(self, u: Subset) -> Optional[bool]:
        if not self.target(u):
            return None
        found = self.cover.find_member_inside(u)
        if found is None:
            return False
        index, member = found
        if not is_subset(member, u):
            return False
        if self.replay and not self.cover.parts[index].is_member(member):
            return False
        return True


@dataclass(frozen=True)
class CoverageReport:
    ok: bool
    mode: str
    n: int
    checked: int
    targets: int
    counterexample: Optional[Subset] = None


def cost(part: CoverPart, p: Fraction) -> CostReport:
    return part.cost(p)  # type: ignore[return-value]


def smallness_check(cover: Cover, p: Fraction) -> bool:
    """True iff the cover's cost (exact when known, else its upper bound) is at most 1/2."""
    return cover.cost(p).best <= HALF


class CoverageVerifier:
    """Exhaustive and sampled coverage checks."""

    def __init__(self, logger: Logger, workers: int = 1, cap: int = COVERAGE_CAP):
        """Initialize verifier."""
        self.logger = logger
        self.workers = workers
        self.cap = cap

    def verify_coverage(
        self, cover: Cover, target: SubsetPredicate, n: int, replay: bool = True
    ) -> CoverageReport:
        """Check every u with target(u); report the lexicographically first failure."""
        return self.verify_checker(CoverageChecker(cover, target, replay), n)

    def verify_checker(self, checker: Checker, n: int) -> CoverageReport:
        """Exhaustive sweep with a prepared per-subset checker."""
        check_ground_set(n)
        if n > self.cap:
            raise CapExceededError(
                f"exhaustive coverage needs n <= {self.cap}, got {n}", n=n, cap=self.cap
            )
        start_time = time.time()
        result = sweep(checker, n, self.workers)
        duration = (time.time() - start_time) * 1000
        report = CoverageReport(
            ok=result.ok,
            mode="exhaustive",
            n=n,
            checked=result.checked,
            targets=result.targets,
            counterexample=result.counterexample,
        )
        if report.ok:
            self.logger.info(
                "Coverage verified", n=n, targets=report.targets, duration_ms=duration
            )
        else:
            self.logger.warning(
                "Coverage failed",
                n=n,
                counterexample=format_subset(result.counterexample or 0),
                duration_ms=duration,
            )
        return report

    def audit_coverage(
        self, cover: Cover, target: SubsetPredicate, n: int, samples: int, seed: int
    ) -> CoverageReport:
        """Sampled check over uniformly random subsets; never a proof."""
        return self.audit_checker(CoverageChecker(cover, target), n, samples, seed)

    def audit_checker(self, checker: Checker, n: int, samples: int, seed: int) -> CoverageReport:
        check_ground_set(n)
        rng = np.random.default_rng(seed)
        weights = [1 << v for v in range(n)]
        targets = 0
        failure: Optional[Subset] = None
        bits = rng.random((samples, n)) < 0.5
        for row in bits:
            u = sum(w for w, b in zip(weights, row) if b)
            verdict = checker(u)
            if verdict is None:
                continue
            targets += 1
            if not verdict and (failure is None or u < failure):
                failure = u
        self.logger.info("Coverage audited", n=n, samples=samples, seed=seed, targets=targets)
        return CoverageReport(
            ok=failure is None,
            mode="audit",
            n=n,
            checked=samples,
            targets=targets,
            counterexample=failure,
        )

"""Smallness certificates, checkable in exact rational arithmetic."""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Tuple

from .cover import ExplicitList
from .errors import CertificateError
from .family import IncreasingFamily
from .subsets import Subset, format_subset, is_subset

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class FractionalCertificate:
    """λ: subsets → nonnegative rationals witnessing weak p-smallness."""

    p: Fraction
    entries: Tuple[Tuple[Subset, Fraction], ...] = field(default_factory=tuple)

    @property
    def objective(self) -> Fraction:
        """Σ_S λ_S p^|S|."""
        return sum((lam * self.p ** s.bit_count() for s, lam in self.entries), Fraction(0))

    def mass_inside(self, u: Subset) -> Fraction:
        """Σ_{S⊆u} λ_S."""
        return sum((lam for s, lam in self.entries if is_subset(s, u)), Fraction(0))

    def violations(self, family: IncreasingFamily) -> List[Subset]:
        """Minimal sets whose weak-cover constraint fails."""
        return [f for f in family.minimal_sets if self.mass_inside(f) < 1]

    def verify(self, family: IncreasingFamily, require_small: bool = False) -> None:
        """Raise CertificateError unless λ is a feasible fractional cover (and small, if asked)."""
        for s, lam in self.entries:
            if lam < 0:
                raise CertificateError(f"negative weight on {format_subset(s)}", subset=s)
            if s >> family.n:
                raise CertificateError(f"subset {format_subset(s)} outside ground set", subset=s)
        bad = self.violations(family)
        if bad:
            raise CertificateError(
                f"weak-cover constraint fails at {format_subset(bad[0])}",
                subset=bad[0],
                violations=len(bad),
            )
        if require_small and self.objective > HALF:
            raise CertificateError(
                f"objective {self.objective} exceeds 1/2", objective=str(self.objective)
            )


@dataclass(frozen=True)
class IntegralCertificate:
    """An explicit cover witnessing p-smallness."""

    p: Fraction
    cover: ExplicitList

    @property
    def cost(self) -> Fraction:
        report = self.cover.cost(self.p)
        return report.best

    def uncovered(self, family: IncreasingFamily) -> List[Subset]:
        return [f for f in family.minimal_sets if self.cover.find_member_inside(f) is None]

    def verify(self, family: IncreasingFamily, require_small: bool = False) -> None:
        for s in self.cover.subsets:
            if s >> family.n:
                raise CertificateError(f"subset {format_subset(s)} outside ground set", subset=s)
        missing = self.uncovered(family)
        if missing:
            raise CertificateError(
                f"minimal set {format_subset(missing[0])} is not covered",
                subset=missing[0],
                uncovered=len(missing),
            )
        if require_small and self.cost > HALF:
            raise CertificateError(f"cover cost {self.cost} exceeds 1/2", cost=str(self.cost))

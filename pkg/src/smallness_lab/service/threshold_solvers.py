"""Expectation thresholds q and q_f, and the chain q <= q_f <= p_c."""

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from ..domain.certificates import HALF, FractionalCertificate, IntegralCertificate
from ..domain.constants import DEFAULT_BISECTION_TOL, EXACT_LP_CAP, LP_CANDIDATE_CAP
from ..domain.cover import ExplicitList
from ..domain.errors import check
from ..domain.family import IncreasingFamily
from ..domain.interfaces import Logger
from ..domain.rationals import Interval, bisect_threshold
from .branch_and_bound import BranchAndBound
from .fractional_lp import FractionalResult, lp_candidates, min_fractional_cost
from .measure import MeasureProfile, p_c


@dataclass(frozen=True)
class IntegralResult:
    value: Fraction
    certificate: IntegralCertificate
    nodes: int


@dataclass(frozen=True)
class ThresholdBracket:
    interval: Interval
    certificate: "FractionalCertificate | IntegralCertificate"


@dataclass(frozen=True)
class ChainReport:
    """μ_p(F) <= Σ_{U∈F} μ_p(U)·Σ_{S⊆U} λ_S <= Σ_S λ_S p^|S| <= 1/2."""

    p: Fraction
    measure: Fraction
    weighted_measure: Fraction
    objective: Fraction

    @property
    def holds(self) -> bool:
        return self.measure <= self.weighted_measure <= self.objective <= HALF


@dataclass(frozen=True)
class ThresholdSummary:
    p_c: Interval
    q: ThresholdBracket
    q_f: ThresholdBracket
    tol: Fraction

    @property
    def consistent(self) -> bool:
        """q <= q_f <= p_c up to the bisection tolerance."""
        return (
            self.q.interval.hi <= self.q_f.interval.hi + self.tol
            and self.q.interval.lo <= self.q_f.interval.hi
            and self.q_f.interval.lo <= self.p_c.hi + self.tol
        )


def chain_evaluation(family: IncreasingFamily, certificate: FractionalCertificate) -> ChainReport:
    """Evaluate each term of the weak-smallness chain exactly (n within the measure cap).

    The middle term is computed as Σ_S λ_S·μ_p({U ∈ F : U ⊇ S}).
    """
    p = certificate.p
    measure = MeasureProfile.of(family).mu(p)
    weighted = sum(
        (lam * MeasureProfile.of(family, required=s).mu(p) for s, lam in certificate.entries),
        Fraction(0),
    )
    return ChainReport(
        p=p, measure=measure, weighted_measure=weighted, objective=certificate.objective
    )


class ThresholdSolver:
    """Computes p-smallness certificates and bisects for q and q_f."""

    def __init__(
        self,
        logger: Logger,
        lp_candidate_cap: int = LP_CANDIDATE_CAP,
        exact_lp_cap: int = EXACT_LP_CAP,
        tol: Fraction = DEFAULT_BISECTION_TOL,
    ):
        """Initialize solver."""
        self.logger = logger
        self.lp_candidate_cap = lp_candidate_cap
        self.exact_lp_cap = exact_lp_cap
        self.tol = tol

    def min_fractional_cost(self, family: IncreasingFamily, p: Fraction) -> FractionalResult:
        result = min_fractional_cost(family, p, self.lp_candidate_cap, self.exact_lp_cap)
        self.logger.debug(
            "Fractional cover solved",
            p=str(p),
            value=str(result.value),
            method=result.method,
            candidates=result.candidates,
        )
        return result

    def min_integral_cost(self, family: IncreasingFamily, p: Fraction) -> IntegralResult:
        candidates = lp_candidates(family.minimal_sets, self.lp_candidate_cap)
        if p == 0:
            cover = ExplicitList(subsets=family.minimal_sets)
            certificate = IntegralCertificate(p=p, cover=cover)
            return IntegralResult(value=Fraction(0), certificate=certificate, nodes=0)
        solution = BranchAndBound(family.minimal_sets, candidates, p).run()
        certificate = IntegralCertificate(p=p, cover=ExplicitList(subsets=solution.cover))
        certificate.verify(family)
        check(certificate.cost == solution.cost, "cover-cost", cost=str(solution.cost))
        self.logger.debug(
            "Integral cover solved", p=str(p), value=str(solution.cost), nodes=solution.nodes
        )
        return IntegralResult(value=solution.cost, certificate=certificate, nodes=solution.nodes)

    def q_f(self, family: IncreasingFamily) -> ThresholdBracket:
        """Bracket of the largest p at which the family is weakly p-small.

        A float-path optimum counts as small only when its repaired certificate is,
        so lo always carries a valid certificate.
        """

        def weakly_small(p: Fraction) -> Tuple[bool, FractionalCertificate]:
            result = self.min_fractional_cost(family, p)
            return result.value <= HALF, result.certificate

        interval, certificate = bisect_threshold(weakly_small, self.tol)
        certificate.verify(family, require_small=True)
        return ThresholdBracket(interval=interval, certificate=certificate)

    def q_threshold(self, family: IncreasingFamily) -> ThresholdBracket:
        def small(p: Fraction) -> Tuple[bool, IntegralCertificate]:
            result = self.min_integral_cost(family, p)
            return result.value <= HALF, result.certificate

        interval, certificate = bisect_threshold(small, self.tol)
        certificate.verify(family, require_small=True)
        return ThresholdBracket(interval=interval, certificate=certificate)

    def thresholds(self, family: IncreasingFamily) -> ThresholdSummary:
        """p_c, q and q_f brackets; asserts the chain at the certified q_f endpoint."""
        start_time = time.time()
        summary = ThresholdSummary(
            p_c=p_c(family, self.tol),
            q=self.q_threshold(family),
            q_f=self.q_f(family),
            tol=self.tol,
        )
        certificate = summary.q_f.certificate
        assert isinstance(certificate, FractionalCertificate)
        chain = chain_evaluation(family, certificate)
        check(chain.holds, "weak-smallness-chain", p=str(chain.p), measure=str(chain.measure))
        check(
            summary.consistent,
            "threshold-chain",
            q=str(summary.q.interval.hi),
            q_f=str(summary.q_f.interval.hi),
        )
        self.logger.info(
            "Thresholds computed",
            n=family.n,
            minimal_sets=len(family.minimal_sets),
            p_c=float(summary.p_c.lo),
            q=float(summary.q.interval.lo),
            q_f=float(summary.q_f.interval.lo),
            duration_ms=(time.time() - start_time) * 1000,
        )
        return summary

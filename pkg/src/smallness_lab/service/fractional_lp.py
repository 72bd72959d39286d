"""The weak-cover LP: minimize Σ λ_S p^|S| subject to Σ_{S⊆F} λ_S >= 1 for every minimal F.

Only nonempty subsets of minimal sets are candidates: constraints bind at minimal
members only, so mass on any other set can be moved to one of its subsets inside
a minimal set without raising the cost.

The exact path solves the packing dual max Σ y_F, Σ_{F⊇S} y_F <= p^|S| with the
rational simplex and reads λ off the optimal dual values. Above the exact cap the
primal goes to HiGHS and both solutions are repaired into exactly feasible ones.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix

from ..domain.certificates import FractionalCertificate
from ..domain.constants import EXACT_LP_CAP, LP_CANDIDATE_CAP, LP_REPAIR_FACTOR
from ..domain.errors import CapExceededError, CertificateError, InvariantViolation, check
from ..domain.family import IncreasingFamily
from ..domain.subsets import Subset, is_subset, nonempty_subsets_of
from .simplex import solve_packing


@dataclass(frozen=True)
class FractionalResult:
    """Certified bracket [lower, value] of the LP optimum and a certificate achieving value."""

    value: Fraction
    lower: Fraction
    certificate: FractionalCertificate
    exact: bool
    method: str
    candidates: int


def lp_candidates(sets: Sequence[Subset], cap: int = LP_CANDIDATE_CAP) -> List[Subset]:
    """Distinct nonempty subsets of the given sets, in increasing mask order."""
    for s in sets:
        if (1 << s.bit_count()) - 1 > cap:
            raise CapExceededError(
                f"minimal set of size {s.bit_count()} alone exceeds {cap} LP candidates; "
                "restrict the family",
                cap=cap,
            )
    seen: set = set()
    for s in sets:
        seen.update(nonempty_subsets_of(s))
        if len(seen) > cap:
            raise CapExceededError(
                f"more than {cap} LP candidates; "
                "restrict the family to fewer or smaller minimal sets",
                cap=cap,
            )
    return sorted(seen)


def _certificate(
    p: Fraction, candidates: Sequence[Subset], weights: Sequence[Fraction]
) -> FractionalCertificate:
    entries = tuple((s, lam) for s, lam in zip(candidates, weights) if lam > 0)
    return FractionalCertificate(p=p, entries=entries)


def solve_exact(
    sets: Sequence[Subset], candidates: Sequence[Subset], p: Fraction
) -> Tuple[Fraction, List[Fraction]]:
    """Exact optimum and optimal λ (aligned with candidates) via the packing dual."""
    A = [[Fraction(1) if is_subset(s, f) else Fraction(0) for f in sets] for s in candidates]
    b = [p ** s.bit_count() for s in candidates]
    solution = solve_packing(A, b, [Fraction(1)] * len(sets))
    lam = list(solution.duals)
    primal = sum((w * c for w, c in zip(lam, b)), Fraction(0))
    check(
        primal == solution.objective,
        "lp-strong-duality",
        primal=str(primal),
        dual=str(solution.objective),
    )
    return solution.objective, lam


def solve_float(
    sets: Sequence[Subset], candidates: Sequence[Subset], p: Fraction
) -> Tuple[List[Fraction], List[Fraction]]:
    """HiGHS solution of the primal, repaired: (λ exactly feasible, y exactly dual-feasible)."""
    index = {s: j for j, s in enumerate(candidates)}
    rows, cols = [], []
    for i, f in enumerate(sets):
        for s in nonempty_subsets_of(f):
            rows.append(i)
            cols.append(index[s])
    A_ub = csr_matrix(
        (-np.ones(len(rows)), (np.array(rows), np.array(cols))), shape=(len(sets), len(candidates))
    )
    costs = [p ** s.bit_count() for s in candidates]
    result = linprog(
        np.array([float(c) for c in costs]),
        A_ub=A_ub,
        b_ub=-np.ones(len(sets)),
        bounds=[(0, None)] * len(candidates),
        method="highs",
    )
    if not result.success:
        raise InvariantViolation("lp-solve", f"HiGHS failed: {result.message}")

    lam = [Fraction(float(x)) * LP_REPAIR_FACTOR if x > 0 else Fraction(0) for x in result.x]
    coverage = [sum((lam[index[s]] for s in nonempty_subsets_of(f)), Fraction(0)) for f in sets]
    smallest = min(coverage)
    if smallest <= 0:
        raise CertificateError("floating point LP solution leaves a minimal set uncovered")
    if smallest < 1:
        lam = [x / smallest for x in lam]

    y = [Fraction(float(-m)) if m < 0 else Fraction(0) for m in result.ineqlin.marginals]
    factor = Fraction(1)
    for j, s in enumerate(candidates):
        load = sum((y[i] for i, f in enumerate(sets) if is_subset(s, f)), Fraction(0))
        if load > costs[j]:
            factor = min(factor, costs[j] / load)
    y = [x * factor for x in y]
    return lam, y


def min_fractional_cost(
    family: IncreasingFamily,
    p: Fraction,
    candidate_cap: int = LP_CANDIDATE_CAP,
    exact_cap: int = EXACT_LP_CAP,
) -> FractionalResult:
    sets = family.minimal_sets
    candidates = lp_candidates(sets, candidate_cap)
    if len(candidates) <= exact_cap:
        value, lam = solve_exact(sets, candidates, p)
        certificate = _certificate(p, candidates, lam)
        certificate.verify(family)
        check(certificate.objective == value, "certificate-objective")
        return FractionalResult(
            value=value,
            lower=value,
            certificate=certificate,
            exact=True,
            method="exact-simplex",
            candidates=len(candidates),
        )
    lam, y = solve_float(sets, candidates, p)
    certificate = _certificate(p, candidates, lam)
    certificate.verify(family)
    lower = sum(y, Fraction(0))
    check(
        lower <= certificate.objective,
        "lp-weak-duality",
        lower=str(lower),
        upper=str(certificate.objective),
    )
    return FractionalResult(
        value=certificate.objective,
        lower=lower,
        certificate=certificate,
        exact=False,
        method="highs-repaired",
        candidates=len(candidates),
    )

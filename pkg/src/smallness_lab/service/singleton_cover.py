"""Prefix-binomial covers of {U : ζ(U) >= J·ζ(V)·p} for vertex weights ζ."""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from ..domain.constants import E_UPPER, TWO_E_GUARD
from ..domain.cover import Cover, CostMethod, CostReport, ExplicitList, PrefixBinomial
from ..domain.errors import ConfigurationError, DegenerateInstanceError, check
from ..domain.rationals import ceil_fraction
from ..domain.subsets import Subset


@dataclass(frozen=True)
class SingletonInstance:
    zeta: Tuple[Fraction, ...]
    p: Fraction
    J: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "zeta", tuple(Fraction(z) for z in self.zeta))
        if any(z < 0 for z in self.zeta):
            raise ConfigurationError("vertex weights must be nonnegative")
        if not 0 <= self.p <= 1:
            raise ConfigurationError(f"probability {self.p} outside [0, 1]")
        if self.J <= TWO_E_GUARD:
            raise DegenerateInstanceError(
                f"J = {self.J} must exceed 2e (guard {TWO_E_GUARD})", J=str(self.J)
            )
        if self.total <= 0:
            raise DegenerateInstanceError("all vertex weights are zero")
        if self.p == 0:
            raise DegenerateInstanceError("p = 0 leaves a = ceil(1/(Jp)) undefined")

    @classmethod
    def of(cls, zeta: Sequence[Fraction], p: Fraction, J: Fraction) -> "SingletonInstance":
        return cls(zeta=tuple(zeta), p=p, J=J)

    @property
    def n(self) -> int:
        return len(self.zeta)

    @property
    def total(self) -> Fraction:
        return sum(self.zeta, Fraction(0))

    @property
    def empty_target(self) -> bool:
        """Jp > 1 means ζ(U) <= ζ(V) < Jζ(V)p for every U."""
        return self.J * self.p > 1

    def order(self) -> Tuple[int, ...]:
        """Positive-weight vertices by non-increasing ζ, ties by index."""
        support = [v for v, z in enumerate(self.zeta) if z > 0]
        return tuple(sorted(support, key=lambda v: (-self.zeta[v], v)))

    def weight(self, u: Subset) -> Fraction:
        return sum((z for v, z in enumerate(self.zeta) if u >> v & 1), Fraction(0))


@dataclass(frozen=True)
class SingletonTarget:
    """ζ(U) >= J·ζ(V)·p."""

    instance: SingletonInstance

    def __call__(self, u: Subset) -> bool:
        inst = self.instance
        return inst.weight(u) >= inst.J * inst.total * inst.p


@dataclass(frozen=True)
class SingletonCover:
    cover: Cover
    report: CostReport
    a: Optional[int]
    R: Optional[Fraction]
    # e/(R - e), with e rounded up
    geometric_bound: Optional[Fraction]
    # 2e/(J - 2e), with e rounded up
    bound: Fraction

    @property
    def part(self) -> Optional[PrefixBinomial]:
        part = self.cover.parts[0] if self.cover.parts else None
        return part if isinstance(part, PrefixBinomial) else None


def singleton_bound(J: Fraction) -> Fraction:
    """2e/(J - 2e) with e rounded up: an upper bound on the true value."""
    return 2 * E_UPPER / (J - 2 * E_UPPER)


def build_singleton_cover(inst: SingletonInstance) -> SingletonCover:
    """Cover ⋃_k binom(first a·k vertices, k), a = ⌈1/(Jp)⌉, with cost < e/(R-e) < 2e/(J-2e)."""
    bound = singleton_bound(inst.J)
    if inst.empty_target:
        cover = Cover.of([ExplicitList(subsets=())])
        return SingletonCover(
            cover=cover,
            report=CostReport.exactly(Fraction(0), CostMethod.ENUMERATION),
            a=None,
            R=None,
            geometric_bound=None,
            bound=bound,
        )
    order = inst.order()
    a = ceil_fraction(1 / (inst.J * inst.p))
    R = 1 / (a * inst.p)
    part = PrefixBinomial(order=order, a=a, kmax=len(order))
    report = part.cost(inst.p)
    # J/2 < R <= J once Jp <= 1
    check(inst.J / 2 < R <= inst.J, "singleton-R-range", R=str(R), J=str(inst.J))
    geometric = E_UPPER / (R - E_UPPER)
    check(
        report.best < geometric,
        "singleton-geometric-bound",
        cost=str(report.best),
        bound=str(geometric),
    )
    check(geometric < bound, "singleton-bound", geometric=str(geometric), bound=str(bound))
    return SingletonCover(
        cover=Cover.of([part]),
        report=CostReport(upper_bound=bound, method=CostMethod.CLOSED_FORM, exact=report.exact),
        a=a,
        R=R,
        geometric_bound=geometric,
        bound=bound,
    )


def singleton_witness(part: PrefixBinomial, u: Subset) -> Optional[int]:
    """Smallest k with |u ∩ first a·k vertices| >= k, or None."""
    return part.witness_k(u)

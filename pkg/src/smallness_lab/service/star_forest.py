"""Star-forest covers of {U : |G[U]| >= max{T, J·|D_G(U)|·p}} for simple graphs.

The cover is ⋃_i γ(b_i, L_i) over a schedule fixed by T₀ = 2^(2k+3) <= T; below
T = 32 the edge set itself is used. Costs follow a chain of bounds, each link
checked in exact arithmetic.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Dict, List, Optional, Tuple

from ..domain.constants import E_UPPER
from ..domain.cover import Cover, CostReport, CostMethod, ExplicitList, StarForestFamily
from ..domain.errors import ConfigurationError, DegenerateInstanceError, InvariantViolation, check
from ..domain.graph import WeightedGraph
from ..domain.rationals import bounded_power, floor_log2
from ..domain.stars import (
    Star,
    StarForest,
    elementary_symmetric,
    good_threshold,
    is_special,
    special_size,
)
from ..domain.subsets import Subset, to_indices

TRIVIAL_T = 32


@dataclass(frozen=True)
class Tr2Instance:
    """Graph (weights ignored), p, J, μ >= |G|p² and target T = c·J²·μ."""

    graph: WeightedGraph
    p: Fraction
    J: Fraction
    mu: Fraction
    T: Fraction

    def __post_init__(self) -> None:
        if not 0 <= self.p <= 1:
            raise ConfigurationError(f"probability {self.p} outside [0, 1]")
        if self.J <= 0 or self.T <= 0:
            raise ConfigurationError("J and T must be positive")
        if self.mu <= 0:
            raise DegenerateInstanceError("μ must be positive")
        if len(self.graph) * self.p**2 > self.mu:
            raise ConfigurationError(
                f"|G|p² = {len(self.graph) * self.p ** 2} exceeds μ = {self.mu}",
                mu=str(self.mu),
            )

    @property
    def c(self) -> Fraction:
        return self.T / (self.mu * self.J**2)

    @property
    def J1(self) -> Fraction:
        """J/(8e) with e rounded up, so J₁ is understated and bounds in J₁^-1 overstated."""
        return self.J / (8 * E_UPPER)

    @property
    def general_conditions(self) -> bool:
        """c >= 256e/J and J >= 8e."""
        return self.c >= 256 * E_UPPER / self.J and self.J >= 8 * E_UPPER

    def with_target(self, T: Fraction) -> "Tr2Instance":
        return Tr2Instance(graph=self.graph, p=self.p, J=self.J, mu=self.mu, T=T)


@dataclass(frozen=True)
class Tr2Target:
    """|G[U]| >= max{T, J·|D_G(U)|·p}."""

    graph: WeightedGraph
    J: Fraction
    p: Fraction
    T: Fraction

    @classmethod
    def of(cls, inst: Tr2Instance, T: Optional[Fraction] = None) -> "Tr2Target":
        return cls(graph=inst.graph, J=inst.J, p=inst.p, T=inst.T if T is None else T)

    def __call__(self, u: Subset) -> bool:
        induced = self.graph.induced_edge_count(u)
        return induced >= self.T and induced >= self.J * self.graph.boundary_size(u) * self.p


def reduce_T(T: Fraction) -> Optional[Tuple[int, int]]:
    """(k, T₀) with T₀ = 2^(2k+3) the largest such value <= T; None when T < 32."""
    if T <= 0:
        raise ConfigurationError("T must be positive")
    if T < TRIVIAL_T:
        return None
    k = (floor_log2(Fraction(T)) - 3) // 2
    return k, 1 << (2 * k + 3)


@dataclass(frozen=True)
class Schedule:
    k: int
    L: Tuple[int, ...]
    delta: Tuple[Fraction, ...]
    b: Tuple[int, ...]

    @property
    def T0(self) -> int:
        return 1 << (2 * self.k + 3)

    def pairs(self) -> List[Tuple[int, int, int]]:
        """(i, b_i, L_i) for i = 1..k."""
        return [(i + 1, self.b[i], self.L[i]) for i in range(self.k)]

    def as_dict(self) -> Dict[str, object]:
        return {
            "k": self.k,
            "T0": self.T0,
            "L": list(self.L),
            "delta": [str(d) for d in self.delta],
            "b": list(self.b),
        }


def build_schedule(k: int) -> Schedule:
    """L_i = 2^(i-1), δ_i = max{2^-(i+2), 2^(i-k-3)}, b_i = δ_i·4^-i·T₀."""
    if k < 1:
        raise ConfigurationError("schedule needs k >= 1", k=k)
    T0 = 1 << (2 * k + 3)
    L, delta, b = [], [], []
    for i in range(1, k + 1):
        L_i = 1 << (i - 1)
        d_i = max(Fraction(1, 1 << (i + 2)), Fraction(2) ** (i - k - 3))
        b_frac = d_i * T0 / Fraction(4) ** i
        check(b_frac.denominator == 1, "schedule-b-integral", i=i, b=str(b_frac))
        b_i = int(b_frac)
        upper = 1 << (2 * k + 1 - 3 * i) if 2 * k + 1 >= 3 * i else 0
        check(b_i == max(upper, 1 << (k - i)), "schedule-b-closed-form", i=i)
        check(b_i & (b_i - 1) == 0, "schedule-b-power-of-two", i=i)
        check(d_i >= Fraction(1, 8 * L_i), "schedule-delta-lower", i=i)
        check((1 << (L_i + 4)) * d_i >= L_i, "schedule-final-L", i=i)
        L.append(L_i)
        delta.append(d_i)
        b.append(b_i)
    check(sum(delta, Fraction(0)) <= Fraction(1, 2), "schedule-delta-sum", k=k)
    check(b[-1] == 1, "schedule-b-last", k=k)
    return Schedule(k=k, L=tuple(L), delta=tuple(delta), b=tuple(b))


@dataclass(frozen=True)
class GreedyStep:
    center: int
    leaves: Subset
    d: int


@dataclass(frozen=True)
class Decomposition:
    steps: Tuple[GreedyStep, ...]
    residual: Subset

    @property
    def sum_squares(self) -> int:
        return sum(step.d**2 for step in self.steps)


def greedy_decompose(inst: Tr2Instance, u: Subset) -> Decomposition:
    """Repeatedly remove a largest good star (v, N(v) ∩ U_{j-1}); ties by smallest center.

    Goodness uses full-graph degrees: |S| >= J·d_v·p/4, and S must be nonempty.
    """
    graph = inst.graph
    current = u
    steps: List[GreedyStep] = []
    while True:
        best: Optional[Tuple[int, int]] = None
        for v in to_indices(current):
            size = (graph.adjacency[v] & current).bit_count()
            if size == 0 or size < good_threshold(graph.degrees[v], inst.J, inst.p):
                continue
            if best is None or size > best[1]:
                best = (v, size)
        if best is None:
            break
        v, size = best
        leaves = graph.adjacency[v] & current
        steps.append(GreedyStep(center=v, leaves=leaves, d=size))
        current &= ~(leaves | (1 << v))
    for earlier, later in zip(steps, steps[1:]):
        check(earlier.d >= later.d, "greedy-non-increasing")
    return Decomposition(steps=tuple(steps), residual=current)


def buckets(schedule: Schedule, decomposition: Decomposition) -> List[List[GreedyStep]]:
    """B_i: d_j in [2^(i-1), 2^i) for i < k, d_j >= 2^(k-1) for i = k."""
    out: List[List[GreedyStep]] = [[] for _ in range(schedule.k)]
    for step in decomposition.steps:
        i = min(step.d.bit_length(), schedule.k)
        out[i - 1].append(step)
    return out


@dataclass(frozen=True)
class Witness:
    i: int
    forest: StarForest


def find_witness(
    inst: Tr2Instance, schedule: Schedule, u: Subset, in_target: bool = False
) -> Optional[Witness]:
    """A member of some γ(b_i, L_i) inside u, built from the greedy decomposition.

    With in_target set, the decomposition inequalities that guarantee a witness are asserted.
    """
    decomposition = greedy_decompose(inst, u)
    groups = buckets(schedule, decomposition)
    if in_target:
        induced = inst.graph.induced_edge_count(u)
        check(2 * decomposition.sum_squares >= induced, "sum-d-squared", subset=u, induced=induced)
        below = sum(len(groups[i - 1]) * 4**i for i in range(1, schedule.k))
        check(len(groups[-1]) >= 1 or 2 * below >= schedule.T0, "bucket-dichotomy", subset=u)
    for index, group in enumerate(groups):
        b_i = schedule.b[index]
        if len(group) < b_i:
            continue
        L_i = schedule.L[index]
        stars = []
        for step in group[:b_i]:
            size = special_size(inst.graph, step.center, L_i, inst.J, inst.p)
            pool = to_indices(step.leaves)
            if len(pool) < size:
                raise InvariantViolation(
                    "witness-trim", f"star at {step.center} has {len(pool)} < {size} leaves"
                )
            leaves = 0
            for x in pool[:size]:
                leaves |= 1 << x
            star = Star(center=step.center, leaves=leaves)
            check(
                is_special(inst.graph, star, L_i, inst.J, inst.p),
                "witness-special",
                center=step.center,
            )
            stars.append(star)
        forest = StarForest(stars=tuple(stars))
        check(forest.is_disjoint(), "witness-disjoint")
        check(forest.mask & ~u == 0, "witness-inside")
        return Witness(i=index + 1, forest=forest)
    if in_target:
        raise InvariantViolation("witness-exists", "no bucket reaches its b_i", subset=u)
    return None


@dataclass(frozen=True)
class Tr2WitnessChecker:
    """Coverage check driven by the greedy decomposition instead of a blind search."""

    instance: Tr2Instance
    schedule: Schedule
    target: Tr2Target

    def __call__(self, u: Subset) -> Optional[bool]:
        if not self.target(u):
            return None
        witness = find_witness(self.instance, self.schedule, u, in_target=True)
        if witness is None:
            return False
        b = self.schedule.b[witness.i - 1]
        L = self.schedule.L[witness.i - 1]
        if len(witness.forest.stars) != b:
            return False
        inst = self.instance
        return all(is_special(inst.graph, star, L, inst.J, inst.p) for star in witness.forest.stars)


@dataclass(frozen=True)
class PieceBound:
    """Cost chain for one γ(b_i, L_i); *_base values are the b-th roots of the bounds."""

    i: int
    b: int
    L: int
    enumerated: Optional[Fraction]
    star_dp: Fraction
    q_dp: Fraction
    symmetric_base: Fraction
    phi: Fraction
    phi_bound: Fraction
    phi_base: Fraction
    lb_base: Fraction

    @property
    def lb(self) -> Tuple[Fraction, bool]:
        return bounded_power(self.lb_base, self.b)


@dataclass(frozen=True)
class Tr2CostReport:
    pieces: Tuple[PieceBound, ...]
    total: Fraction
    total_exact: bool
    lb_total: Fraction
    cg_total: Fraction
    special_bound: Fraction
    general_bound: Optional[Fraction]
    c0: Fraction


@dataclass(frozen=True)
class Tr2Cover:
    instance: Tr2Instance
    cover: Cover
    schedule: Optional[Schedule]
    T0: Optional[int]

    @property
    def trivial(self) -> bool:
        return self.schedule is None

    def reduced(self) -> Tr2Instance:
        return self.instance if self.T0 is None else self.instance.with_target(Fraction(self.T0))


def trivial_edge_cover(graph: WeightedGraph) -> ExplicitList:
    """Every edge as a 2-set; covers any target with at least one induced edge, at cost |G|p²."""
    return ExplicitList(subsets=graph.edge_masks)


def build_tr2_cover(inst: Tr2Instance) -> Tr2Cover:
    reduction = reduce_T(inst.T)
    if reduction is None:
        cover = Cover.of([trivial_edge_cover(inst.graph)])
        return Tr2Cover(instance=inst, cover=cover, schedule=None, T0=None)
    k, T0 = reduction
    schedule = build_schedule(k)
    parts = [
        StarForestFamily(graph=inst.graph, b=b, L=L, J=inst.J, p=inst.p)
        for _, b, L in schedule.pairs()
    ]
    return Tr2Cover(instance=inst, cover=Cover.of(parts), schedule=schedule, T0=T0)


def q_values(inst: Tr2Instance, L: int) -> Tuple[Fraction, ...]:
    """q_v = p·(e·d_v·p/L^v)^(L^v), e rounded up; bounds the cost of all L-special stars at v."""
    out = []
    for v in range(inst.graph.n):
        size = special_size(inst.graph, v, L, inst.J, inst.p)
        out.append(inst.p * (E_UPPER * inst.graph.degrees[v] * inst.p / size) ** size)
    return tuple(out)


def reduced_conditions(inst: Tr2Instance, T0: int) -> bool:
    """c₀ = T₀/(μJ²) >= 64e/J and J >= 8e, with e rounded up."""
    c0 = Fraction(T0) / (inst.mu * inst.J**2)
    return c0 >= 64 * E_UPPER / inst.J and inst.J >= 8 * E_UPPER


def cost_bound(tr2: Tr2Cover) -> Tr2CostReport:
    """Check the cost chain of every star-forest piece and of the totals.

    Per piece: enumerated <= e_b(star costs) <= e_b(q) <= (eφ/b)^b <= φ-bound
    <= [c₀/4·J₁^(L+1)]^-b. Totals: Σ <= geometric sum <= 8c₀^-1·J₁^-(2^(k-1)+1).

    Links sharing the exponent b are checked on their bases; numeric totals are
    checked whenever every power is evaluated exactly.
    """
    if tr2.schedule is None or tr2.T0 is None:
        raise ConfigurationError("cost chain applies to the star-forest schedule only (T >= 32)")
    inst = tr2.instance
    schedule = tr2.schedule
    T0 = tr2.T0
    if not reduced_conditions(inst, T0):
        raise DegenerateInstanceError(
            "star-forest cost bounds need c0 >= 64e/J and J >= 8e",
            c0=str(Fraction(T0) / (inst.mu * inst.J**2)),
        )
    c0 = Fraction(T0) / (inst.mu * inst.J**2)
    J1 = inst.J1
    p = inst.p
    pieces = []
    all_exact = True
    for (i, b, L), part, delta in zip(schedule.pairs(), tr2.cover.parts, schedule.delta):
        assert isinstance(part, StarForestFamily)
        report = part.cost(p)
        star_dp = report.upper_bound
        q = q_values(inst, L)
        q_dp = elementary_symmetric(q, b)
        phi = sum(q, Fraction(0))
        check(report.exact is None or report.exact <= star_dp, "cost-enumerated-le-dp", i=i)
        check(star_dp <= q_dp, "cost-star-dp-le-q-dp", i=i)
        symmetric_base = E_UPPER * phi / b
        if b <= inst.graph.n:
            check(q_dp <= symmetric_base**b, "cost-q-dp-le-symmetric", i=i)
        else:
            check(q_dp == 0, "cost-q-dp-vanishes", i=i)
        phi_bound = 2 * inst.mu * E_UPPER / L * (4 * E_UPPER / inst.J) ** (L - 1)
        check(phi <= phi_bound, "cost-phi", i=i)
        phi_base = E_UPPER * phi_bound / b
        check(b * 4 * L * L == delta * T0, "schedule-b-identity", i=i)
        lb_base = 4 / (c0 * J1 ** (L + 1))
        check(symmetric_base <= phi_base, "cost-symmetric-le-phi", i=i)
        check(phi_base <= lb_base, "cost-phi-le-lb", i=i)
        check(lb_base <= Fraction(1, 2), "cost-lb-base-half", i=i)
        check(b >= 1 << (schedule.k - i), "cost-b-lower", i=i)
        pieces.append(
            PieceBound(
                i=i,
                b=b,
                L=L,
                enumerated=report.exact,
                star_dp=star_dp,
                q_dp=q_dp,
                symmetric_base=symmetric_base,
                phi=phi,
                phi_bound=phi_bound,
                phi_base=phi_base,
                lb_base=lb_base,
            )
        )

    check(c0 * J1 / 4 >= 2, "cost-cg-ratio", c0=str(c0))
    lb_total = Fraction(0)
    cg_total = Fraction(0)
    for piece in pieces:
        value, exact = bounded_power(piece.lb_base, piece.b)
        cg_value, cg_exact = bounded_power(piece.lb_base, 1 << (schedule.k - piece.i))
        all_exact = all_exact and exact and cg_exact
        lb_total += value
        cg_total += cg_value
    power, exact = bounded_power(1 / J1, (1 << (schedule.k - 1)) + 1)
    all_exact = all_exact and exact
    special = 8 / c0 * power
    total = sum(
        (piece.star_dp if piece.enumerated is None else piece.enumerated for piece in pieces),
        Fraction(0),
    )
    check(total <= sum((piece.star_dp for piece in pieces), Fraction(0)), "cost-total-dp")
    if all_exact:
        check(sum((piece.q_dp for piece in pieces), Fraction(0)) <= lb_total, "cost-total-le-lb")
        check(lb_total <= cg_total, "cost-lb-le-cg")
        check(cg_total < special, "cost-cg-le-special")

    general: Optional[Fraction] = None
    if inst.general_conditions:
        exponent = max(2, isqrt(int(inst.T)) // 16)
        check((1 << (schedule.k - 1)) + 1 >= exponent, "cost-general-exponent")
        check(4 * c0 > inst.c, "cost-general-c0")
        general_power, general_exact = bounded_power(1 / J1, exponent)
        general = 32 / inst.c * general_power
        if all_exact and general_exact:
            check(special <= general, "cost-special-le-general")
    return Tr2CostReport(
        pieces=tuple(pieces),
        total=total,
        total_exact=all(piece.enumerated is not None for piece in pieces),
        lb_total=lb_total,
        cg_total=cg_total,
        special_bound=special,
        general_bound=general,
        c0=c0,
    )


def trivial_cost(inst: Tr2Instance) -> CostReport:
    """|G|p² <= μ < 32c^-1·J₁^-2 for the edge cover used when T < 32."""
    value = len(inst.graph) * inst.p**2
    check(value <= inst.mu, "trivial-cost-mu")
    bound = 32 / inst.c * (1 / inst.J1) ** 2
    check(inst.mu < bound, "trivial-cost-bound")
    return CostReport(upper_bound=bound, method=CostMethod.ANALYTIC_BOUND, exact=value)

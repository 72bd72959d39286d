"""Covers of U₀ = {U : λ(G[U]) >= R²·λ(G)·p²} for edge-weighted graphs.

λ is first rounded down to powers of two (θ_i = 2^-i), which moves U₀ into the
rounded collection at R_w <= R/√2. The cover is then the union of
  - a prefix-binomial piece for the sets with λ′(D(U)) >= R_w·λ′(G)·p,
  - one piece per dyadic class G_i, placed in an (α, β) array by
    E_i = |G_i|p² ∈ (2^(α-1), 2^α] and rank β within column α: the edge list
    when T_{α,β} = 1, otherwise a star-forest cover with J = R_w/2, μ = 2^α.
"""

import time
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Tuple

from ..domain.constants import E_UPPER, PIPELINE_R_GUARD_FACTOR, R_ROUNDING_BITS, REDUCED_R_GUARD
from ..domain.cover import Cover, CostMethod, CostReport, ExplicitList
from ..domain.errors import ConfigurationError, DegenerateInstanceError, check
from ..domain.graph import WeightedGraph
from ..domain.interfaces import CoverPart, Logger
from ..domain.rationals import bounded_power, ceil_log2, sqrt_floor
from ..domain.subsets import Subset, is_subset
from .cover_engine import CoverageReport, CoverageVerifier
from .graph_weights import (
    DyadicRounding,
    boundary_weight,
    induced_weight,
    round_down_dyadic,
    theta,
)
from .singleton_cover import (
    SingletonCover,
    SingletonInstance,
    SingletonTarget,
    build_singleton_cover,
)
from .star_forest import (
    Tr2Cover,
    Tr2Instance,
    Tr2Target,
    build_tr2_cover,
    cost_bound,
    find_witness,
    trivial_cost,
)

# f(s) terms below 2^-80 of the running sum end the s-series.
_SERIES_CUTOFF = Fraction(1, 1 << 80)
_SERIES_MIN_S = 10


@dataclass(frozen=True)
class PipelineInstance:
    graph: WeightedGraph
    p: Fraction
    R: Fraction
    # R >= 32 instead of the theorem guard; costs are reported but not asserted
    reduced_guard: bool = False

    def __post_init__(self) -> None:
        if not 0 <= self.p <= 1:
            raise ConfigurationError(f"probability {self.p} outside [0, 1]")
        if self.p == 0:
            raise DegenerateInstanceError("p = 0 makes U₀ the whole power set")
        if self.R <= 0:
            raise ConfigurationError("R must be positive")
        if self.reduced_guard:
            if self.R < REDUCED_R_GUARD:
                raise DegenerateInstanceError(
                    f"reduced guard needs R >= {REDUCED_R_GUARD}", R=str(self.R)
                )
        elif self.R_w < PIPELINE_R_GUARD_FACTOR * E_UPPER:
            raise DegenerateInstanceError(
                f"R_w = {float(self.R_w):.6g} below 4096e; use the reduced guard for small R",
                R=str(self.R),
            )

    @property
    def theorem_mode(self) -> bool:
        return not self.reduced_guard

    @cached_property
    def R_w(self) -> Fraction:
        """Largest k/2^40 with R_w² <= R²/2."""
        return sqrt_floor(self.R * self.R / 2, R_ROUNDING_BITS)

    @cached_property
    def rounding(self) -> DyadicRounding:
        return round_down_dyadic(self.graph)

    @property
    def w(self) -> Fraction:
        """λ′(G) after rounding."""
        return self.rounding.rounded.total_weight

    @property
    def J(self) -> Fraction:
        return self.R_w / 2

    @property
    def J1(self) -> Fraction:
        return self.J / (8 * E_UPPER)

    @property
    def empty_target(self) -> bool:
        """R_w·p > 1 leaves no U with λ′(G[U]) >= R_w²·λ′(G)·p²."""
        return self.R_w * self.p > 1


@dataclass(frozen=True)
class WeightedTarget:
    """λ(G[U]) >= R²·λ(G)·p²."""

    graph: WeightedGraph
    R: Fraction
    p: Fraction

    def __call__(self, u: Subset) -> bool:
        return induced_weight(self.graph, u) >= self.R**2 * self.graph.total_weight * self.p**2


@dataclass(frozen=True)
class ClassPlan:
    i: int
    size: int
    E: Fraction
    alpha: int
    beta: int
    c_star: Fraction
    T: Fraction

    @property
    def mu(self) -> Fraction:
        return Fraction(2) ** self.alpha

    @property
    def trivial(self) -> bool:
        return self.T == 1

    @property
    def c(self) -> Fraction:
        """T/(μJ²) = (3/2)^(β-1)/8 when T > 1."""
        return Fraction(3, 2) ** (self.beta - 1) / 8

    @property
    def s(self) -> Optional[int]:
        """T ∈ (2^s, 2^(s+1)]; None when T = 1."""
        if self.trivial:
            return None
        return ceil_log2(self.T) - 1

    @property
    def w(self) -> Fraction:
        return theta(self.i) * self.size

    def y(self, p: Fraction) -> Fraction:
        return theta(self.i) * self.mu / p**2


def build_class_plans(inst: PipelineInstance) -> Tuple[ClassPlan, ...]:
    """Place each dyadic class in the (α, β) array; checks the column halving of y."""
    p = inst.p
    columns: Dict[int, List[int]] = {}
    sizes = {i: len(ids) for i, ids in inst.rounding.decomposition.classes}
    alphas = {}
    for i, size in sizes.items():
        alphas[i] = ceil_log2(size * p**2)
        columns.setdefault(alphas[i], []).append(i)
    plans = []
    for alpha, members in sorted(columns.items()):
        for beta, i in enumerate(sorted(members), start=1):
            c_star = Fraction(3, 2) ** (beta - 1) * inst.R_w**2 / 16
            T = max(c_star * Fraction(2) ** (alpha - 1), Fraction(1))
            plans.append(
                ClassPlan(
                    i=i,
                    size=sizes[i],
                    E=sizes[i] * p**2,
                    alpha=alpha,
                    beta=beta,
                    c_star=c_star,
                    T=T,
                )
            )
    for plan in plans:
        y = plan.y(p)
        check(y / 2 < plan.w <= y, "class-weight-vs-y", i=plan.i)
    rows: Dict[int, Fraction] = {}
    for plan in plans:
        rows[plan.beta] = rows.get(plan.beta, Fraction(0)) + plan.y(p)
    for beta in sorted(rows):
        if beta + 1 in rows:
            check(rows[beta + 1] <= rows[beta] / 2, "column-halving", beta=beta)
    return tuple(sorted(plans, key=lambda plan: plan.i))


@dataclass(frozen=True)
class ClassPiece:
    plan: ClassPlan
    instance: Tr2Instance
    tr2: Optional[Tr2Cover]
    # slice of the union cover's parts owned by this class
    first_part: int
    stop_part: int

    @property
    def edge_list(self) -> bool:
        return self.tr2 is None or self.tr2.trivial


@dataclass(frozen=True)
class SeriesBound:
    """Σ_s 768·f(s), summed up to s = stop and closed with a geometric tail."""

    value: Fraction
    stop: int
    tail: Fraction


@dataclass(frozen=True)
class PipelineCosts:
    singleton: CostReport
    singleton_bound: Fraction
    trivial: Fraction
    trivial_bound: Fraction
    star: Fraction
    star_bound: Optional[SeriesBound]
    caps_asserted: bool

    @property
    def total(self) -> Fraction:
        return self.singleton.best + self.trivial + self.star

    @property
    def total_bound(self) -> Optional[Fraction]:
        if self.star_bound is None:
            return None
        return self.singleton_bound + self.trivial_bound + self.star_bound.value


@dataclass(frozen=True)
class WeightedCover:
    instance: PipelineInstance
    cover: Cover
    singleton: Optional[SingletonCover]
    singleton_target: Optional[SingletonTarget]
    plans: Tuple[ClassPlan, ...]
    pieces: Tuple[ClassPiece, ...]

    def piece(self, i: int) -> ClassPiece:
        for piece in self.pieces:
            if piece.plan.i == i:
                return piece
        raise KeyError(i)


def f_bound(J1: Fraction, s: int) -> Fraction:
    """Upper value of J₁^-max{2, ⌊2^(⌊s/2⌋-4)⌋}, which dominates min{J₁^-2, J₁^-2^(s/2-4)}."""
    exponent = max(2, (1 << (s // 2)) >> 4)
    value, _ = bounded_power(1 / J1, exponent)
    return value


def star_series_bound(J1: Fraction) -> SeriesBound:
    """Σ_{s>=0} 768·f(s) for J₁ >= 2.

    Terms pair up in s and then square, so the tail is geometric.
    """
    if J1 < 2:
        raise DegenerateInstanceError("series bound needs J₁ >= 2", J1=str(J1))
    total = Fraction(0)
    s = 0
    while True:
        term = 768 * f_bound(J1, s)
        if s >= _SERIES_MIN_S and s % 2 == 0 and term < total * _SERIES_CUTOFF:
            tail_power, _ = bounded_power(1 / J1, 1 << (s // 2 - 4))
            tail = 3072 * tail_power
            return SeriesBound(value=total + tail, stop=s, tail=tail)
        total += term
        s += 1


def build_weighted_cover(inst: PipelineInstance) -> WeightedCover:
    rounded = inst.rounding.rounded
    if inst.empty_target:
        return WeightedCover(
            instance=inst,
            cover=Cover.of([ExplicitList(subsets=())]),
            singleton=None,
            singleton_target=None,
            plans=(),
            pieces=(),
        )
    # ζ(v) = λ′(D_v), half the rounded weighted degree
    zeta = [d / 2 for d in rounded.weighted_degrees]
    zeta_instance = SingletonInstance.of(zeta, inst.p, inst.R_w)
    singleton = build_singleton_cover(zeta_instance)
    parts: List[CoverPart] = list(singleton.cover.parts)
    plans = build_class_plans(inst)
    pieces = []
    class_graphs = inst.rounding.class_graphs
    for plan in plans:
        graph = class_graphs[plan.i]
        tr2_inst = Tr2Instance(graph=graph, p=inst.p, J=inst.J, mu=plan.mu, T=plan.T)
        first = len(parts)
        if plan.trivial:
            parts.append(ExplicitList(subsets=graph.edge_masks))
            tr2 = None
        else:
            tr2 = build_tr2_cover(tr2_inst)
            parts.extend(tr2.cover.parts)
        pieces.append(
            ClassPiece(
                plan=plan, instance=tr2_inst, tr2=tr2, first_part=first, stop_part=len(parts)
            )
        )
    return WeightedCover(
        instance=inst,
        cover=Cover.of(parts),
        singleton=singleton,
        singleton_target=SingletonTarget(zeta_instance),
        plans=plans,
        pieces=tuple(pieces),
    )


def piece_cost(piece: ClassPiece, p: Fraction) -> Fraction:
    if piece.tr2 is None:
        return piece.plan.size * p**2
    return piece.tr2.cover.cost(p).best


def pipeline_costs(weighted: WeightedCover) -> PipelineCosts:
    """Three subtotals and their caps; the caps are asserted in theorem mode only."""
    inst = weighted.instance
    R_w = inst.R_w
    singleton_bound = 2 * E_UPPER / (R_w - 2 * E_UPPER)
    trivial_bound = 192 / R_w**2
    if weighted.singleton is None:
        empty = CostReport.exactly(Fraction(0), CostMethod.ENUMERATION)
        return PipelineCosts(
            empty,
            singleton_bound,
            Fraction(0),
            trivial_bound,
            Fraction(0),
            None,
            inst.theorem_mode,
        )
    p = inst.p
    trivial = Fraction(0)
    trivial_mu = Fraction(0)
    star = Fraction(0)
    for piece in weighted.pieces:
        cost = piece_cost(piece, p)
        if piece.tr2 is None:
            trivial += cost
            trivial_mu += piece.plan.mu
            continue
        star += cost
        if not inst.theorem_mode:
            continue
        tr2_inst = piece.instance
        check(tr2_inst.general_conditions, "class-general-conditions", i=piece.plan.i)
        assert piece.plan.s is not None
        cap = 32 / piece.plan.c * f_bound(tr2_inst.J1, piece.plan.s)
        if piece.tr2.trivial:
            check(trivial_cost(tr2_inst).best <= cap, "class-trivial-cap", i=piece.plan.i)
        else:
            report = cost_bound(piece.tr2)
            check(report.total <= cap, "class-star-cap", i=piece.plan.i)
        check(cost <= cap, "class-cost-cap", i=piece.plan.i)
    series: Optional[SeriesBound] = None
    if inst.theorem_mode:
        series = star_series_bound(inst.J1)
        check(weighted.singleton.report.best < singleton_bound, "singleton-subtotal")
        check(trivial <= trivial_mu <= trivial_bound, "trivial-subtotal", trivial=str(trivial))
        check(star <= series.value, "star-subtotal", star=str(star))
    return PipelineCosts(
        singleton=weighted.singleton.report,
        singleton_bound=singleton_bound,
        trivial=trivial,
        trivial_bound=trivial_bound,
        star=star,
        star_bound=series,
        caps_asserted=inst.theorem_mode,
    )


@dataclass(frozen=True)
class ClassDiagnostics:
    i: int
    L: Fraction
    K: Optional[Fraction]
    # K_i·L_i = |G_i[U]|/(|G_i|p²), defined even when L_i = 0
    heaviness: Fraction


@dataclass(frozen=True)
class Diagnostics:
    L: Fraction
    K: Optional[Fraction]
    classes: Tuple[ClassDiagnostics, ...]
    heavy: Tuple[int, ...]
    in_u_star: bool
    # smallest i ∈ I(U) with K_i·L_i > c_i, when U ∈ U*
    witness_class: Optional[int]


def diagnostics(weighted: WeightedCover, u: Subset) -> Diagnostics:
    """L, K and the per-class L_i, K_i of u in the rounded graph.

    For u ∈ U* (λ′(G[U]) >= R_w²wp² and λ′(D(U)) < R_w·w·p) the heavy-class
    inequalities are asserted and a class i ∈ I(U) with K_iL_i > c_i is returned.
    """
    inst = weighted.instance
    p, R_w, w = inst.p, inst.R_w, inst.w
    rounded = inst.rounding.rounded
    induced = induced_weight(rounded, u)
    boundary = boundary_weight(rounded, u)
    L = boundary / (w * p)
    K = induced / (L * w * p**2) if L > 0 else None
    class_graphs = inst.rounding.class_graphs
    per_class = []
    for plan in weighted.plans:
        graph = class_graphs[plan.i]
        L_i = graph.boundary_size(u) / (plan.size * p)
        heaviness = Fraction(graph.induced_edge_count(u)) / (plan.size * p**2)
        K_i = heaviness / L_i if L_i > 0 else None
        per_class.append(ClassDiagnostics(i=plan.i, L=L_i, K=K_i, heaviness=heaviness))

    pairs = list(zip(per_class, weighted.plans))
    check(sum((d.L * plan.w for d, plan in pairs), Fraction(0)) == L * w, "split-boundary")
    heaviness = sum((d.heaviness * plan.w for d, plan in pairs), Fraction(0))
    check(heaviness == induced / p**2, "split-induced")
    if K is not None:
        check(K * L * w == induced / p**2, "split-K")

    heavy = tuple(d.i for d in per_class if d.K is not None and d.K > R_w / 2)
    in_u_star = induced >= R_w**2 * w * p**2 and L < R_w
    witness_class = None
    if in_u_star:
        by_class = {plan.i: (plan, d) for plan, d in zip(weighted.plans, per_class)}
        c_sum = sum((by_class[i][0].c_star * by_class[i][0].w for i in heavy), Fraction(0))
        heavy_sum = sum((by_class[i][1].heaviness * by_class[i][0].w for i in heavy), Fraction(0))
        check(c_sum < R_w**2 * w / 2 < heavy_sum, "heavy-class-sums", subset=u)
        for i in heavy:
            plan, d = by_class[i]
            if d.heaviness > plan.c_star:
                witness_class = i
                break
        check(witness_class is not None, "heavy-class-exists", subset=u)
    return Diagnostics(
        L=L,
        K=K,
        classes=tuple(per_class),
        heavy=heavy,
        in_u_star=in_u_star,
        witness_class=witness_class,
    )


def replay_member(part: CoverPart, u: Subset) -> bool:
    """A member of part inside u that the part's own membership test accepts."""
    member = part.find_member_inside(u)
    return member is not None and is_subset(member, u) and part.is_member(member)


@dataclass(frozen=True)
class PipelineChecker:
    """Coverage of U₀ routed the way the covering argument goes.

    Singleton piece first, then the class named by the diagnostics; its witness is
    replayed through the owning part's membership test.
    """

    weighted: WeightedCover

    def __call__(self, u: Subset) -> Optional[bool]:
        inst = self.weighted.instance
        if not WeightedTarget(inst.graph, inst.R, inst.p)(u):
            return None
        rounded_target = WeightedTarget(inst.rounding.rounded, inst.R_w, inst.p)
        check(rounded_target(u), "dyadic-containment", subset=u)
        singleton = self.weighted.singleton
        if singleton is None or self.weighted.singleton_target is None:
            return False
        part = singleton.part
        if part is not None and self.weighted.singleton_target(u):
            return replay_member(part, u)
        diag = diagnostics(self.weighted, u)
        if diag.witness_class is None:
            return False
        piece = self.weighted.piece(diag.witness_class)
        if piece.edge_list:
            return replay_member(self.weighted.cover.parts[piece.first_part], u)
        assert piece.tr2 is not None and piece.tr2.schedule is not None
        check(Tr2Target.of(piece.instance)(u), "class-target", subset=u, i=diag.witness_class)
        witness = find_witness(piece.instance, piece.tr2.schedule, u, in_target=True)
        if witness is None:
            return False
        owner = self.weighted.cover.parts[piece.first_part + witness.i - 1]
        return is_subset(witness.forest.mask, u) and owner.is_member(witness.forest.mask)


@dataclass(frozen=True)
class PipelineReport:
    cover: WeightedCover
    costs: PipelineCosts
    coverage: Optional[CoverageReport]

    @property
    def ok(self) -> bool:
        return self.coverage is None or self.coverage.ok


class PipelineVerifier:
    """Builds the weighted cover, checks its subtotals and verifies coverage of U₀."""

    def __init__(self, logger: Logger, verifier: CoverageVerifier):
        """Initialize pipeline verifier."""
        self.logger = logger
        self.verifier = verifier

    def verify_pipeline(
        self,
        inst: PipelineInstance,
        mode: Optional[str] = "exhaustive",
        samples: int = 0,
        seed: int = 0,
    ) -> PipelineReport:
        """mode is "exhaustive", "sampled" (audit with samples and seed) or None for costs only."""
        start_time = time.time()
        weighted = build_weighted_cover(inst)
        costs = pipeline_costs(weighted)
        coverage = None
        checker = PipelineChecker(weighted)
        if mode == "exhaustive":
            coverage = self.verifier.verify_checker(checker, inst.graph.n)
        elif mode == "sampled":
            coverage = self.verifier.audit_checker(checker, inst.graph.n, samples, seed)
        elif mode is not None:
            raise ConfigurationError(f"unknown verification mode {mode!r}")
        self.logger.info(
            "Weighted pipeline checked",
            n=inst.graph.n,
            classes=len(weighted.plans),
            theorem_mode=inst.theorem_mode,
            total_cost=float(costs.total),
            coverage_ok=None if coverage is None else coverage.ok,
            duration_ms=(time.time() - start_time) * 1000,
        )
        return PipelineReport(cover=weighted, costs=costs, coverage=coverage)

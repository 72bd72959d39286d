"""Subcommand handlers: read inputs, run the services, build report models."""

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Tuple

from pydantic import BaseModel

from ..domain.certificates import FractionalCertificate, IntegralCertificate
from ..domain.errors import ConfigurationError
from ..domain.interfaces import Logger
from ..domain.rationals import parse_probability, parse_rational
from ..infra.settings import Settings
from ..infra.storage import FileStore
from ..service.batteries import BatteryResult, VerificationRunner
from ..service.cover_engine import CoverageReport, CoverageVerifier
from ..service.fixtures import SingletonOptimalityFixture, necessity_fixture, small_graph_battery
from ..service.singleton_cover import SingletonInstance, SingletonTarget, build_singleton_cover
from ..service.star_forest import (
    Tr2Instance,
    Tr2Target,
    Tr2WitnessChecker,
    build_tr2_cover,
    cost_bound,
    reduced_conditions,
    trivial_cost,
)
from ..service.threshold_solvers import ThresholdSolver, chain_evaluation
from ..service.weighted_pipeline import PipelineInstance, PipelineVerifier
from .schemas import (
    BatteryModel,
    CertificateFile,
    ChainModel,
    CheckReport,
    ClassPlanModel,
    CoverageModel,
    CoverModel,
    FamilyFile,
    FixtureModel,
    FixturesReport,
    FractionalCertificateFile,
    GraphCoverReport,
    GraphFile,
    IntegralCertificateFile,
    IntervalModel,
    PieceModel,
    ResultRow,
    SingletonReport,
    SubtotalsModel,
    ThresholdsReport,
    VerifyReport,
    WeightedReport,
    ZetaFile,
    optional_rational,
    plain,
    rational,
    subset_indices,
)

BATTERIES = (
    "chain",
    "singleton",
    "star-forest",
    "decomposition",
    "pipeline",
    "necessity",
    "schedule",
    "replay",
)


@dataclass
class CommandResult:
    report: BaseModel
    rows: List[ResultRow] = field(default_factory=list)
    ok: bool = True


def parse_verify_mode(text: Optional[str]) -> Tuple[Optional[str], int, int]:
    """"exhaustive" or "sampled:N:seed" into (mode, samples, seed)."""
    if text is None:
        return None, 0, 0
    if text == "exhaustive":
        return "exhaustive", 0, 0
    parts = text.split(":")
    if len(parts) == 3 and parts[0] == "sampled":
        try:
            samples, seed = int(parts[1]), int(parts[2])
        except ValueError as e:
            raise ConfigurationError(f"bad verify mode {text!r}") from e
        if samples < 1:
            raise ConfigurationError("sampled verification needs N >= 1")
        return "sampled", samples, seed
    raise ConfigurationError(f"verify mode must be exhaustive or sampled:N:seed, got {text!r}")


def coverage_model(report: Optional[CoverageReport]) -> Optional[CoverageModel]:
    if report is None:
        return None
    return CoverageModel(
        ok=report.ok,
        mode=report.mode,
        n=report.n,
        checked=report.checked,
        targets=report.targets,
        counterexample=subset_indices(report.counterexample),
    )


def verdict(report: Optional[CoverageReport]) -> str:
    if report is None:
        return "unverified"
    if not report.ok:
        return "fail"
    return "pass" if report.mode == "exhaustive" else "audit-pass"


def fixture_size(model: FixtureModel) -> int:
    if model.graph is not None:
        return model.graph.n
    return model.family.n if model.family is not None else 0


class Commands:
    """One method per subcommand; each returns the report and its CSV rows."""

    def __init__(self, logger: Logger, settings: Settings, store: FileStore):
        """Initialize handlers."""
        self.logger = logger
        self.settings = settings
        self.store = store
        self.solver = ThresholdSolver(
            logger,
            lp_candidate_cap=settings.lp_candidate_cap,
            exact_lp_cap=settings.exact_lp_cap,
            tol=settings.bisection_tol,
        )
        self.verifier = CoverageVerifier(
            logger, workers=settings.workers, cap=settings.coverage_cap
        )

    def thresholds(self, family_path: Path) -> CommandResult:
        family = self.store.read_model(family_path, FamilyFile).to_family()
        summary = self.solver.thresholds(family)
        fractional = summary.q_f.certificate
        assert isinstance(fractional, FractionalCertificate)
        chain = chain_evaluation(family, fractional)
        integral = summary.q.certificate
        assert isinstance(integral, IntegralCertificate)
        report = ThresholdsReport(
            n=family.n,
            minimal_sets=len(family.minimal_sets),
            tol=rational(summary.tol),
            p_c=IntervalModel(lo=rational(summary.p_c.lo), hi=rational(summary.p_c.hi)),
            q=IntervalModel(lo=rational(summary.q.interval.lo), hi=rational(summary.q.interval.hi)),
            q_f=IntervalModel(
                lo=rational(summary.q_f.interval.lo), hi=rational(summary.q_f.interval.hi)
            ),
            consistent=summary.consistent,
            chain=ChainModel(
                measure=rational(chain.measure),
                weighted_measure=rational(chain.weighted_measure),
                objective=rational(chain.objective),
                holds=chain.holds,
            ),
            fractional_certificate=FractionalCertificateFile.of(fractional),
            integral_certificate=IntegralCertificateFile.of(integral),
        )
        name = Path(family_path).stem
        rows = [
            ResultRow(
                instance_id=f"{name}:{label}",
                n=family.n,
                p=str(interval.lo),
                bound=str(interval.hi),
                verdict="consistent" if summary.consistent else "inconsistent",
            )
            for label, interval in (
                ("p_c", summary.p_c),
                ("q", summary.q.interval),
                ("q_f", summary.q_f.interval),
            )
        ]
        return CommandResult(report=report, rows=rows, ok=summary.consistent)

    def cover_singleton(
        self,
        p: str,
        J: str,
        graph_path: Optional[Path] = None,
        zeta_path: Optional[Path] = None,
        verify: bool = False,
    ) -> CommandResult:
        """ζ from a zeta file, or ζ(v) = λ(D_v) for a graph file."""
        if (graph_path is None) == (zeta_path is None):
            raise ConfigurationError("give exactly one of --graph and --zeta")
        if graph_path is not None:
            graph = self.store.read_model(graph_path, GraphFile).to_graph()
            zeta = [d / 2 for d in graph.weighted_degrees]
            source = Path(graph_path)
        else:
            assert zeta_path is not None
            zeta = self.store.read_model(zeta_path, ZetaFile).to_weights()
            source = Path(zeta_path)
        inst = SingletonInstance.of(zeta, parse_probability(p), parse_rational(J))
        built = build_singleton_cover(inst)
        coverage = None
        if verify:
            coverage = self.verifier.verify_coverage(built.cover, SingletonTarget(inst), inst.n)
        report = SingletonReport(
            n=inst.n,
            p=rational(inst.p),
            J=rational(inst.J),
            empty_target=inst.empty_target,
            a=built.a,
            R=optional_rational(built.R),
            cost=rational(built.report.best),
            geometric_bound=optional_rational(built.geometric_bound),
            bound=rational(built.bound),
            cover=CoverModel.of(list(built.cover.parts)),
            coverage=coverage_model(coverage),
        )
        row = ResultRow(
            instance_id=source.stem,
            n=inst.n,
            p=str(inst.p),
            bound=str(built.bound),
            exact=str(built.report.best),
            verdict=verdict(coverage),
        )
        return CommandResult(report=report, rows=[row], ok=coverage is None or coverage.ok)

    def cover_graph(
        self,
        graph_path: Path,
        p: str,
        J: str,
        T: str,
        mu: Optional[str] = None,
        verify: bool = False,
    ) -> CommandResult:
        """Star-forest cover; μ defaults to |G|p²."""
        graph = self.store.read_model(graph_path, GraphFile).to_graph()
        p_value = parse_probability(p)
        mu_value = parse_rational(mu) if mu is not None else len(graph) * p_value**2
        inst = Tr2Instance(
            graph=graph, p=p_value, J=parse_rational(J), mu=mu_value, T=parse_rational(T)
        )
        tr2 = build_tr2_cover(inst)
        pieces: List[PieceModel] = []
        special = general = None
        if tr2.trivial:
            conditions_met = True
            cost_report = trivial_cost(inst)
            cost, cost_exact = cost_report.best, True
        else:
            assert tr2.T0 is not None
            conditions_met = reduced_conditions(inst, tr2.T0)
            if conditions_met:
                chain = cost_bound(tr2)
                cost, cost_exact = chain.total, chain.total_exact
                special, general = chain.special_bound, chain.general_bound
                for piece in chain.pieces:
                    lb, lb_exact = piece.lb
                    pieces.append(
                        PieceModel(
                            i=piece.i,
                            b=piece.b,
                            L=piece.L,
                            enumerated=optional_rational(piece.enumerated),
                            star_dp=rational(piece.star_dp),
                            q_dp=rational(piece.q_dp),
                            symmetric_base=rational(piece.symmetric_base),
                            phi=rational(piece.phi),
                            phi_bound=rational(piece.phi_bound),
                            lb_base=rational(piece.lb_base),
                            lb=rational(lb),
                            lb_exact=lb_exact,
                        )
                    )
            else:
                self.logger.warning("Cost chain skipped: c0 or J below the guard", T0=tr2.T0)
                cost_report = tr2.cover.cost(p_value)
                cost, cost_exact = cost_report.best, cost_report.exact is not None
        coverage = None
        if verify:
            target = Tr2Target.of(inst)
            if tr2.schedule is None:
                coverage = self.verifier.verify_coverage(tr2.cover, target, graph.n)
            else:
                checker = Tr2WitnessChecker(inst, tr2.schedule, target)
                coverage = self.verifier.verify_checker(checker, graph.n)
        report = GraphCoverReport(
            n=graph.n,
            edges=len(graph),
            p=rational(inst.p),
            J=rational(inst.J),
            T=rational(inst.T),
            mu=rational(inst.mu),
            c=rational(inst.c),
            trivial=tr2.trivial,
            schedule=None if tr2.schedule is None else tr2.schedule.as_dict(),
            conditions_met=conditions_met,
            cost=rational(cost),
            cost_exact=cost_exact,
            pieces=pieces,
            special_bound=optional_rational(special),
            general_bound=optional_rational(general),
            cover=CoverModel.of(list(tr2.cover.parts)),
            coverage=coverage_model(coverage),
        )
        row = ResultRow(
            instance_id=Path(graph_path).stem,
            n=graph.n,
            p=str(inst.p),
            bound="" if special is None else str(special),
            exact=str(cost) if cost_exact else "",
            verdict=verdict(coverage),
        )
        return CommandResult(report=report, rows=[row], ok=coverage is None or coverage.ok)

    def cover_weighted(
        self,
        graph_path: Path,
        p: str,
        R: str,
        verify: Optional[str] = None,
        reduced_guard: bool = False,
    ) -> CommandResult:
        graph = self.store.read_model(graph_path, GraphFile).to_graph()
        inst = PipelineInstance(
            graph=graph, p=parse_probability(p), R=parse_rational(R), reduced_guard=reduced_guard
        )
        mode, samples, seed = parse_verify_mode(verify)
        pipeline = PipelineVerifier(self.logger, self.verifier)
        result = pipeline.verify_pipeline(inst, mode, samples, seed)
        costs = result.costs
        series = costs.star_bound
        report = WeightedReport(
            n=graph.n,
            p=rational(inst.p),
            R=rational(inst.R),
            R_w=rational(inst.R_w),
            mode="theorem" if inst.theorem_mode else "reduced-guard",
            scale=rational(inst.rounding.scale),
            threshold_original=rational(inst.R**2 * graph.total_weight * inst.p**2),
            empty_target=inst.empty_target,
            plans=[
                ClassPlanModel(
                    i=plan.i,
                    size=plan.size,
                    E=rational(plan.E),
                    alpha=plan.alpha,
                    beta=plan.beta,
                    T=rational(plan.T),
                    piece="edges" if result.cover.piece(plan.i).edge_list else "star-forest",
                )
                for plan in result.cover.plans
            ],
            subtotals=SubtotalsModel(
                singleton=rational(costs.singleton.best),
                singleton_bound=rational(costs.singleton_bound),
                trivial=rational(costs.trivial),
                trivial_bound=rational(costs.trivial_bound),
                star=rational(costs.star),
                star_bound=None if series is None else rational(series.value),
                series_stop=None if series is None else series.stop,
                series_tail=None if series is None else rational(series.tail),
                total=rational(costs.total),
                total_bound=optional_rational(costs.total_bound),
                caps_asserted=costs.caps_asserted,
            ),
            coverage=coverage_model(result.coverage),
        )
        row = ResultRow(
            instance_id=Path(graph_path).stem,
            n=graph.n,
            p=str(inst.p),
            bound="" if costs.total_bound is None else str(costs.total_bound),
            exact=str(costs.total),
            verdict=verdict(result.coverage),
        )
        return CommandResult(report=report, rows=[row], ok=result.ok)

    def verify_chain(
        self, n: int, trials: int, seed: int, batteries: Tuple[str, ...] = ("chain",)
    ) -> CommandResult:
        """Run the named batteries; "chain" is q <= q_f <= p_c on random families with n <= `n`."""
        unknown = [name for name in batteries if name not in BATTERIES]
        if unknown:
            raise ConfigurationError(f"unknown batteries {unknown}", choices=list(BATTERIES))
        if n < 1 or trials < 0:
            raise ConfigurationError("need n >= 1 and trials >= 0")
        runner = VerificationRunner(self.logger, self.solver, self.verifier)
        results: List[BatteryResult] = []
        for name in batteries:
            if name == "chain":
                results.append(runner.chain(trials, n, seed))
            elif name == "singleton":
                results.append(runner.singleton(trials, seed))
            elif name == "star-forest":
                results.append(runner.star_forest(trials, seed))
            elif name == "decomposition":
                results.append(runner.decomposition(trials, seed))
            elif name == "pipeline":
                results.append(runner.pipeline(trials, seed))
            elif name == "necessity":
                results.append(runner.necessity())
            elif name == "schedule":
                results.append(runner.schedule())
            else:
                results.append(runner.replay(trials, n, seed))
        ok = all(result.ok for result in results)
        report = VerifyReport(
            command="verify-chain",
            seed=seed,
            batteries=[
                BatteryModel(
                    name=result.name,
                    trials=result.trials,
                    failures=result.failures,
                    first_failure=(
                        None if result.first_failure is None else plain(result.first_failure)
                    ),
                )
                for result in results
            ],
            ok=ok,
        )
        rows = [
            ResultRow(
                instance_id=result.name,
                n=n,
                p="",
                bound=str(result.failures),
                exact=str(result.trials),
                verdict="pass" if result.ok else "fail",
            )
            for result in results
        ]
        return CommandResult(report=report, rows=rows, ok=ok)

    def fixtures(self) -> CommandResult:
        necessity = necessity_fixture()
        optimality = SingletonOptimalityFixture(J=6)
        models = [
            FixtureModel(
                name="star-union-necessity",
                description=(
                    "(Kp)^-1 disjoint copies of K_{1,m}; "
                    "{U : |G[U]| >= mp} costs at least 1/K to cover"
                ),
                graph=GraphFile.of(necessity.graph),
                family=FamilyFile.of(necessity.family()),
                p=rational(necessity.p),
                data={
                    "K": str(necessity.K),
                    "m": necessity.m,
                    "copies": necessity.copies,
                    "T": str(necessity.T),
                    "mu": str(necessity.mu),
                    "lower_bound": str(necessity.lower_bound),
                    "centers": [subset_indices(c) for c in necessity.centers()],
                },
            ),
            FixtureModel(
                name="singleton-optimality",
                description="|V| = J, p = J^-2, unit weights; the cheapest cover costs 1/J",
                family=FamilyFile.of(optimality.family()),
                p=rational(optimality.instance.p),
                data={"J": optimality.J, "optimum": str(optimality.optimum)},
            ),
        ]
        for name, graph in small_graph_battery().items():
            models.append(
                FixtureModel(
                    name=name,
                    description=f"unit-weight graph, {graph.n} vertices, {len(graph)} edges",
                    graph=GraphFile.of(graph),
                )
            )
        rows = [
            ResultRow(
                instance_id=model.name,
                n=fixture_size(model),
                p="" if model.p is None else f"{model.p.num}/{model.p.den}",
                bound=str(model.data.get("lower_bound", model.data.get("optimum", ""))),
                verdict="fixture",
            )
            for model in models
        ]
        return CommandResult(report=FixturesReport(fixtures=models), rows=rows)

    def check(
        self, family_path: Path, certificate_path: Path, require_small: bool = False
    ) -> CommandResult:
        """Re-verify a certificate from disk; CertificateError on any failed constraint."""
        family = self.store.read_model(family_path, FamilyFile).to_family()
        loaded = self.store.read_model(certificate_path, CertificateFile).root
        certificate = loaded.to_certificate(family.n)
        certificate.verify(family, require_small=require_small)
        if isinstance(certificate, FractionalCertificate):
            kind = "fractional"
            objective = certificate.objective
        else:
            kind = "integral"
            objective = certificate.cost
        small = objective <= Fraction(1, 2)
        self.logger.info("Certificate verified", kind=kind, n=family.n, objective=str(objective))
        report = CheckReport(kind=kind, objective=rational(objective), small=small, ok=True)
        row = ResultRow(
            instance_id=Path(certificate_path).stem,
            n=family.n,
            p=str(certificate.p),
            bound="1/2",
            exact=str(objective),
            verdict="small" if small else "not-small",
        )
        return CommandResult(report=report, rows=[row])

"""Randomized verification batteries run by `verify-chain` and the test suite."""

import tempfile
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from ..api.schemas import FractionalCertificateFile, IntegralCertificateFile
from ..domain.errors import SmallnessLabError, check
from ..domain.interfaces import Logger
from ..domain.stars import good_threshold
from ..domain.subsets import Subset, to_indices
from ..infra.storage import FileStore, render_json
from .cover_engine import CoverageVerifier
from .fixtures import (
    necessity_fixture,
    random_family,
    random_graph,
    random_singleton_instance,
    random_weighted_graph,
    tr2_instance_at_guard,
)
from .singleton_cover import SingletonTarget, build_singleton_cover
from .star_forest import (
    Tr2Instance,
    Tr2Target,
    Tr2WitnessChecker,
    buckets,
    build_schedule,
    build_tr2_cover,
    cost_bound,
    greedy_decompose,
    reduce_T,
)
from .threshold_solvers import ThresholdSolver
from .weighted_pipeline import PipelineInstance, PipelineVerifier

# Smallest R with R_w >= 4096e after the √2 loss of dyadic rounding.
THEOREM_R = Fraction(15750)
TR2_J = Fraction(22)
# Schedules with k = 1, 2, 3 pieces, taken in turn by trial.
TR2_T0S = (32, 128, 512)


@dataclass
class BatteryResult:
    name: str
    trials: int = 0
    failures: int = 0
    first_failure: Optional[Dict[str, Any]] = None

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def record(self, detail: Dict[str, Any]) -> None:
        self.failures += 1
        if self.first_failure is None:
            self.first_failure = detail


@dataclass(frozen=True)
class DecompositionChecker:
    """Greedy decomposition properties on every target set."""

    instance: Tr2Instance
    target: Tr2Target

    def __call__(self, u: Subset) -> Optional[bool]:
        if not self.target(u):
            return None
        inst = self.instance
        graph = inst.graph
        decomposition = greedy_decompose(inst, u)
        used = 0
        remaining = u
        for step in decomposition.steps:
            mask = step.leaves | (1 << step.center)
            expected = graph.adjacency[step.center] & remaining & ~(1 << step.center)
            if used & mask or step.leaves != expected:
                return False
            used |= mask
            remaining &= ~mask
        for v in to_indices(decomposition.residual):
            size = (graph.adjacency[v] & decomposition.residual).bit_count()
            if size > 0 and size >= good_threshold(graph.degrees[v], inst.J, inst.p):
                return False
        induced = graph.induced_edge_count(u)
        if 2 * decomposition.sum_squares < induced:
            return False
        reduction = reduce_T(inst.T)
        if reduction is None:
            return True
        schedule = build_schedule(reduction[0])
        groups = buckets(schedule, decomposition)
        return any(len(group) >= b for group, b in zip(groups, schedule.b))


@dataclass
class VerificationRunner:
    """Runs the acceptance batteries with seeded randomness; results never depend on workers."""

    logger: Logger
    solver: ThresholdSolver
    verifier: CoverageVerifier
    results: List[BatteryResult] = field(default_factory=list)

    def _run(
        self, name: str, trials: int, body: Callable[[int, BatteryResult], None]
    ) -> BatteryResult:
        start_time = time.time()
        log = self.logger.bind(battery=name)
        result = BatteryResult(name=name)
        for trial in range(trials):
            result.trials += 1
            try:
                body(trial, result)
            except SmallnessLabError as e:
                log.debug("Trial failed", trial=trial, reason=e.reason)
                result.record({"trial": trial, **e.to_dict()})
        log.info(
            "Battery finished",
            trials=result.trials,
            failures=result.failures,
            duration_ms=(time.time() - start_time) * 1000,
        )
        self.results.append(result)
        return result

    def chain(self, trials: int, max_n: int, seed: int) -> BatteryResult:
        """q <= q_f <= p_c on random families."""
        rng = np.random.default_rng(seed)

        def body(trial: int, result: BatteryResult) -> None:
            family = random_family(int(rng.integers(1, max_n + 1)), rng)
            summary = self.solver.thresholds(family)
            if not summary.consistent:
                sets = [to_indices(s) for s in family.minimal_sets]
                result.record({"trial": trial, "minimal_sets": sets})

        return self._run("threshold-chain", trials, body)

    def singleton(self, trials: int, seed: int, max_n: int = 16) -> BatteryResult:
        """Exhaustive coverage and exact cost below 2e/(J-2e)."""
        rng = np.random.default_rng(seed)

        def body(trial: int, result: BatteryResult) -> None:
            inst = random_singleton_instance(rng, max_n)
            built = build_singleton_cover(inst)
            report = self.verifier.verify_coverage(built.cover, SingletonTarget(inst), inst.n)
            if not report.ok or built.report.best >= built.bound:
                result.record(
                    {"trial": trial, "n": inst.n, "counterexample": report.counterexample}
                )

        return self._run("singleton-cover", trials, body)

    def _tr2_instance(self, rng: np.random.Generator, trial: int) -> Tr2Instance:
        n = int(rng.integers(9, 15))
        graph = random_graph(n, float(rng.uniform(0.6, 0.95)), int(rng.integers(0, 1 << 31)))
        return tr2_instance_at_guard(graph, TR2_J, TR2_T0S[trial % len(TR2_T0S)])

    def star_forest(self, trials: int, seed: int) -> BatteryResult:
        """Witness coverage of the D-conditioned target and the full cost chain."""
        rng = np.random.default_rng(seed)

        def body(trial: int, result: BatteryResult) -> None:
            inst = self._tr2_instance(rng, trial)
            tr2 = build_tr2_cover(inst)
            assert tr2.schedule is not None
            cost_bound(tr2)
            checker = Tr2WitnessChecker(inst, tr2.schedule, Tr2Target.of(inst))
            report = self.verifier.verify_checker(checker, inst.graph.n)
            if not report.ok:
                result.record(
                    {"trial": trial, "n": inst.graph.n, "counterexample": report.counterexample}
                )

        return self._run("star-forest-cover", trials, body)

    def decomposition(self, trials: int, seed: int) -> BatteryResult:
        """Greedy decomposition internals on the star-forest instances."""
        rng = np.random.default_rng(seed)

        def body(trial: int, result: BatteryResult) -> None:
            inst = self._tr2_instance(rng, trial)
            checker = DecompositionChecker(inst, Tr2Target.of(inst))
            report = self.verifier.verify_checker(checker, inst.graph.n)
            if not report.ok:
                result.record(
                    {"trial": trial, "n": inst.graph.n, "counterexample": report.counterexample}
                )

        return self._run("greedy-decomposition", trials, body)

    def pipeline(self, trials: int, seed: int, max_n: int = 12) -> BatteryResult:
        """Weighted pipeline in theorem mode, then in reduced-guard mode, per trial."""
        rng = np.random.default_rng(seed)
        pipeline = PipelineVerifier(self.logger, self.verifier)

        def body(trial: int, result: BatteryResult) -> None:
            n = int(rng.integers(2, max_n + 1))
            density = float(rng.uniform(0.3, 0.9))
            graph = random_weighted_graph(n, density, int(rng.integers(0, 1 << 31)))
            for reduced, R in ((False, THEOREM_R), (True, Fraction(int(rng.integers(32, 65))))):
                sizing = PipelineInstance(graph=graph, p=Fraction(1), R=R, reduced_guard=reduced)
                # p <= 1/R_w keeps the rounded target nonempty
                q = int(sizing.R_w) + 1 + int(rng.integers(0, int(sizing.R_w) + 1))
                inst = PipelineInstance(graph=graph, p=Fraction(1, q), R=R, reduced_guard=reduced)
                report = pipeline.verify_pipeline(inst)
                if not report.ok:
                    assert report.coverage is not None
                    result.record(
                        {
                            "trial": trial,
                            "reduced": reduced,
                            "counterexample": report.coverage.counterexample,
                        }
                    )

        return self._run("weighted-pipeline", trials, body)

    def necessity(self) -> BatteryResult:
        """Without the D_G(U) condition the star-union target costs at least 1/K."""

        def body(trial: int, result: BatteryResult) -> None:
            fixture = necessity_fixture()
            check(fixture.graph.n <= 14, "necessity-size")
            value = self.solver.min_integral_cost(fixture.family(), fixture.p).value
            if value < fixture.lower_bound:
                result.record({"minimum": str(value), "lower_bound": str(fixture.lower_bound)})

        return self._run("necessity", 1, body)

    def schedule(self, max_k: int = 20) -> BatteryResult:
        def body(trial: int, result: BatteryResult) -> None:
            build_schedule(trial + 1)

        return self._run("schedule", max_k, body)

    def replay(self, trials: int, max_n: int, seed: int) -> BatteryResult:
        """Certificates written to disk and read back re-verify, and re-render byte for byte."""
        rng = np.random.default_rng(seed)
        store = FileStore()

        def body(trial: int, result: BatteryResult) -> None:
            family = random_family(int(rng.integers(1, max_n + 1)), rng)
            p = Fraction(int(rng.integers(1, 16)), 16)
            fractional = FractionalCertificateFile.of(
                self.solver.min_fractional_cost(family, p).certificate
            )
            integral = IntegralCertificateFile.of(
                self.solver.min_integral_cost(family, p).certificate
            )
            with tempfile.TemporaryDirectory() as tmp:
                for name, model in (("fractional.json", fractional), ("integral.json", integral)):
                    path = Path(tmp) / name
                    store.write_json(model, path)
                    loaded = store.read_model(path, type(model))
                    if render_json(loaded) != path.read_text(encoding="utf-8"):
                        result.record({"trial": trial, "file": name, "reason": "re-render differs"})
                        return
                    loaded.to_certificate(family.n).verify(family)

        return self._run("certificate-replay", trials, body)

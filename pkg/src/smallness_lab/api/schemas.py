"""Pydantic schemas for input files, certificates, covers and reports."""

from fractions import Fraction
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, RootModel, field_validator, model_validator

from ..domain.certificates import FractionalCertificate, IntegralCertificate
from ..domain.constants import MAX_GROUND_SET
from ..domain.cover import ExplicitList, PrefixBinomial, StarForestFamily
from ..domain.errors import SmallnessLabError
from ..domain.family import IncreasingFamily
from ..domain.graph import WeightedGraph
from ..domain.interfaces import CoverPart
from ..domain.rationals import parse_rational
from ..domain.subsets import Subset, from_indices, to_indices


class RationalModel(BaseModel):
    """Exact rational as decimal strings, plus a float for reading."""

    num: str = Field(..., description="Numerator")
    den: str = Field(..., description="Denominator, positive")
    approx: float = Field(..., description="Decimal approximation, never read back")

    @model_validator(mode="before")
    @classmethod
    def accept_text(cls, v: Any) -> Any:
        """Accept "num/den", decimals and integers as well as the object form."""
        if isinstance(v, (str, int, Fraction)):
            return cls.dump(parse_rational(v))
        if isinstance(v, dict) and "approx" not in v and "num" in v and "den" in v:
            try:
                return {**v, "approx": float(Fraction(int(v["num"]), int(v["den"])))}
            except (TypeError, ValueError, ZeroDivisionError):
                # left to the field validators
                return {**v, "approx": 0.0}
        return v

    @field_validator("num", "den")
    @classmethod
    def validate_integer(cls, v: str) -> str:
        """Validate integer text."""
        int(v)
        return v

    @field_validator("den")
    @classmethod
    def validate_den(cls, v: str) -> str:
        """Validate denominator."""
        if int(v) <= 0:
            raise ValueError("denominator must be positive")
        return v

    @staticmethod
    def dump(x: Fraction) -> Dict[str, Any]:
        x = Fraction(x)
        return {"num": str(x.numerator), "den": str(x.denominator), "approx": float(x)}

    @classmethod
    def of(cls, x: Fraction) -> "RationalModel":
        return cls(**cls.dump(x))

    def to_fraction(self) -> Fraction:
        return Fraction(int(self.num), int(self.den))


class FamilyFile(BaseModel):
    """{"n": int, "minimal_sets": [[int, ...], ...]} with 0-based indices."""

    n: int = Field(..., ge=0, le=MAX_GROUND_SET, description="Ground set size")
    minimal_sets: List[List[int]] = Field(..., description="Generating sets as index lists")

    @model_validator(mode="after")
    def validate_indices(self) -> "FamilyFile":
        """Validate vertex indices against n."""
        for s in self.minimal_sets:
            for v in s:
                if not 0 <= v < self.n:
                    raise ValueError(f"vertex {v} outside [0, {self.n})")
        return self

    def to_family(self) -> IncreasingFamily:
        return IncreasingFamily.from_index_lists(self.n, self.minimal_sets)

    @classmethod
    def of(cls, family: IncreasingFamily) -> "FamilyFile":
        return cls(n=family.n, minimal_sets=[to_indices(s) for s in family.minimal_sets])


class GraphFile(BaseModel):
    """{"n": int, "edges": [[u, v, "num/den"], ...]}; a missing weight means 1."""

    n: int = Field(..., ge=0, le=MAX_GROUND_SET, description="Number of vertices")
    edges: List[List[Union[int, str]]] = Field(
        default_factory=list, description="Edges with optional weight"
    )

    @field_validator("edges")
    @classmethod
    def validate_edges(cls, v: List[List[Union[int, str]]]) -> List[List[Union[int, str]]]:
        """Validate edge arity and endpoint types."""
        for edge in v:
            if len(edge) not in (2, 3):
                raise ValueError(f"edge {edge} must be [u, v] or [u, v, weight]")
            if not all(isinstance(x, int) for x in edge[:2]):
                raise ValueError(f"edge {edge} endpoints must be integers")
        return v

    def to_graph(self) -> WeightedGraph:
        pairs = tuple((int(e[0]), int(e[1])) for e in self.edges)
        weights = tuple(parse_rational(e[2]) if len(e) == 3 else Fraction(1) for e in self.edges)
        return WeightedGraph(n=self.n, edges=pairs, weights=weights)

    @classmethod
    def of(cls, graph: WeightedGraph) -> "GraphFile":
        edges = [[u, v, str(w)] for (u, v), w in zip(graph.edges, graph.weights)]
        return cls(n=graph.n, edges=edges)


class ZetaFile(BaseModel):
    """Vertex weights for the singleton cover: {"zeta": ["num/den", ...]}."""

    zeta: List[RationalModel] = Field(..., description="Nonnegative vertex weights")

    def to_weights(self) -> List[Fraction]:
        return [z.to_fraction() for z in self.zeta]


class FractionalCertificateFile(BaseModel):
    """{"p": rational, "lambda": [[subset, rational], ...]}."""

    p: RationalModel
    lambda_: List[Tuple[List[int], RationalModel]] = Field(..., alias="lambda")

    model_config = {"populate_by_name": True}

    def to_certificate(self, n: int) -> FractionalCertificate:
        entries = tuple((from_indices(s, n), lam.to_fraction()) for s, lam in self.lambda_)
        return FractionalCertificate(p=self.p.to_fraction(), entries=entries)

    @classmethod
    def of(cls, certificate: FractionalCertificate) -> "FractionalCertificateFile":
        return cls(
            p=RationalModel.of(certificate.p),
            lambda_=[(to_indices(s), RationalModel.of(lam)) for s, lam in certificate.entries],
        )


class IntegralCertificateFile(BaseModel):
    """{"p": rational, "cover": [subset, ...]}."""

    p: RationalModel
    cover: List[List[int]]

    def to_certificate(self, n: int) -> IntegralCertificate:
        subsets = tuple(from_indices(s, n) for s in self.cover)
        return IntegralCertificate(p=self.p.to_fraction(), cover=ExplicitList(subsets=subsets))

    @classmethod
    def of(cls, certificate: IntegralCertificate) -> "IntegralCertificateFile":
        cover = [to_indices(s) for s in certificate.cover.subsets]
        return cls(p=RationalModel.of(certificate.p), cover=cover)


class CertificateFile(RootModel[Union[FractionalCertificateFile, IntegralCertificateFile]]):
    """Either certificate kind, told apart by its "lambda" or "cover" key."""


class ExplicitPartModel(BaseModel):
    kind: Literal["explicit"] = "explicit"
    subsets: List[List[int]]


class PrefixBinomialPartModel(BaseModel):
    kind: Literal["prefix-binomial"] = "prefix-binomial"
    order: List[int]
    a: int = Field(..., ge=1)
    kmax: int = Field(..., ge=0)


class StarForestPartModel(BaseModel):
    kind: Literal["star-forest"] = "star-forest"
    b: int = Field(..., ge=1)
    L: int = Field(..., ge=1)
    J: RationalModel
    p: RationalModel


PartModel = Annotated[
    Union[ExplicitPartModel, PrefixBinomialPartModel, StarForestPartModel],
    Field(discriminator="kind"),
]


class CoverModel(BaseModel):
    """Tagged union of cover parts; star-forest parts refer to the report's graph."""

    parts: List[PartModel] = Field(default_factory=list)

    @classmethod
    def of(cls, parts: List[CoverPart]) -> "CoverModel":
        out: List[PartModel] = []
        for part in parts:
            if isinstance(part, ExplicitList):
                out.append(ExplicitPartModel(subsets=[to_indices(s) for s in part.subsets]))
            elif isinstance(part, PrefixBinomial):
                out.append(
                    PrefixBinomialPartModel(order=list(part.order), a=part.a, kmax=part.kmax)
                )
            elif isinstance(part, StarForestFamily):
                out.append(
                    StarForestPartModel(
                        b=part.b, L=part.L, J=RationalModel.of(part.J), p=RationalModel.of(part.p)
                    )
                )
            else:
                raise TypeError(f"unknown cover part {type(part).__name__}")
        return cls(parts=out)

    def to_parts(self, n: int, graph: Optional[WeightedGraph] = None) -> List[CoverPart]:
        parts: List[CoverPart] = []
        for model in self.parts:
            if isinstance(model, ExplicitPartModel):
                parts.append(ExplicitList(subsets=tuple(from_indices(s, n) for s in model.subsets)))
            elif isinstance(model, PrefixBinomialPartModel):
                parts.append(PrefixBinomial(order=tuple(model.order), a=model.a, kmax=model.kmax))
            else:
                if graph is None:
                    raise ValueError("star-forest parts need the graph")
                parts.append(
                    StarForestFamily(
                        graph=graph,
                        b=model.b,
                        L=model.L,
                        J=model.J.to_fraction(),
                        p=model.p.to_fraction(),
                    )
                )
        return parts


class IntervalModel(BaseModel):
    lo: RationalModel
    hi: RationalModel


class ChainModel(BaseModel):
    measure: RationalModel
    weighted_measure: RationalModel
    objective: RationalModel
    holds: bool


class ThresholdsReport(BaseModel):
    command: Literal["thresholds"] = "thresholds"
    n: int
    minimal_sets: int
    tol: RationalModel
    p_c: IntervalModel
    q: IntervalModel
    q_f: IntervalModel
    consistent: bool
    chain: ChainModel
    fractional_certificate: FractionalCertificateFile
    integral_certificate: IntegralCertificateFile


class CoverageModel(BaseModel):
    ok: bool
    mode: str
    n: int
    checked: int
    targets: int
    counterexample: Optional[List[int]] = None


class SingletonReport(BaseModel):
    command: Literal["cover-singleton"] = "cover-singleton"
    n: int
    p: RationalModel
    J: RationalModel
    empty_target: bool
    a: Optional[int] = None
    R: Optional[RationalModel] = None
    cost: RationalModel
    geometric_bound: Optional[RationalModel] = None
    bound: RationalModel
    cover: CoverModel
    coverage: Optional[CoverageModel] = None


class PieceModel(BaseModel):
    i: int
    b: int
    L: int
    enumerated: Optional[RationalModel] = None
    star_dp: RationalModel
    q_dp: RationalModel
    symmetric_base: RationalModel
    phi: RationalModel
    phi_bound: RationalModel
    lb_base: RationalModel
    lb: RationalModel
    lb_exact: bool


class GraphCoverReport(BaseModel):
    command: Literal["cover-graph"] = "cover-graph"
    n: int
    edges: int
    p: RationalModel
    J: RationalModel
    T: RationalModel
    mu: RationalModel
    c: RationalModel
    trivial: bool
    schedule: Optional[Dict[str, Any]] = None
    conditions_met: bool
    cost: RationalModel
    cost_exact: bool
    pieces: List[PieceModel] = Field(default_factory=list)
    special_bound: Optional[RationalModel] = None
    general_bound: Optional[RationalModel] = None
    cover: CoverModel
    coverage: Optional[CoverageModel] = None


class ClassPlanModel(BaseModel):
    i: int
    size: int
    E: RationalModel
    alpha: int
    beta: int
    T: RationalModel
    piece: Literal["edges", "star-forest"]


class SubtotalsModel(BaseModel):
    singleton: RationalModel
    singleton_bound: RationalModel
    trivial: RationalModel
    trivial_bound: RationalModel
    star: RationalModel
    star_bound: Optional[RationalModel] = None
    series_stop: Optional[int] = None
    series_tail: Optional[RationalModel] = None
    total: RationalModel
    total_bound: Optional[RationalModel] = None
    caps_asserted: bool


class WeightedReport(BaseModel):
    command: Literal["cover-weighted"] = "cover-weighted"
    n: int
    p: RationalModel
    R: RationalModel
    R_w: RationalModel
    mode: Literal["theorem", "reduced-guard"]
    scale: RationalModel
    threshold_original: RationalModel
    empty_target: bool
    plans: List[ClassPlanModel]
    subtotals: SubtotalsModel
    coverage: Optional[CoverageModel] = None


class BatteryModel(BaseModel):
    name: str
    trials: int
    failures: int
    first_failure: Optional[Dict[str, Any]] = None


class VerifyReport(BaseModel):
    command: str
    seed: int
    batteries: List[BatteryModel]
    ok: bool


class FixtureModel(BaseModel):
    name: str
    description: str
    graph: Optional[GraphFile] = None
    family: Optional[FamilyFile] = None
    p: Optional[RationalModel] = None
    data: Dict[str, Any] = Field(default_factory=dict)


class FixturesReport(BaseModel):
    command: Literal["fixtures"] = "fixtures"
    fixtures: List[FixtureModel]


class CheckReport(BaseModel):
    command: Literal["check"] = "check"
    kind: Literal["fractional", "integral"]
    objective: RationalModel
    small: bool
    ok: bool


class ErrorReport(BaseModel):
    """Failure report; reason is machine readable."""

    reason: str = Field(..., description="Error class")
    message: str = Field(..., description="Error message")
    details: Dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def of(cls, error: SmallnessLabError) -> "ErrorReport":
        details = {k: plain(v) for k, v in error.details.items()}
        return cls(reason=error.reason, message=str(error), details=details)


def plain(value: Any) -> Any:
    """JSON-safe form of an error or failure detail."""
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    return str(value)


def rational(x: Fraction) -> RationalModel:
    return RationalModel.of(x)


def optional_rational(x: Optional[Fraction]) -> Optional[RationalModel]:
    return None if x is None else RationalModel.of(x)


def subset_indices(u: Optional[Subset]) -> Optional[List[int]]:
    return None if u is None else to_indices(u)


class ResultRow(BaseModel):
    """One CSV line: instance_id,n,p,bound,exact,verdict."""

    instance_id: str
    n: int
    p: str
    bound: str
    exact: str = ""
    verdict: str

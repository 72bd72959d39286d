"""Unit tests for subcommand handlers."""

import io
import json
from fractions import Fraction

import pytest

from smallness_lab.api.commands import Commands, coverage_model, parse_verify_mode, verdict
from smallness_lab.api.schemas import ThresholdsReport
from smallness_lab.domain.errors import (
    CertificateError,
    ConfigurationError,
    DegenerateInstanceError,
    ImproperFamilyError,
)
from smallness_lab.infra.storage import FileStore
from smallness_lab.service.cover_engine import CoverageReport
from smallness_lab.service.fixtures import small_graph_battery


@pytest.fixture
def commands(mock_logger, settings):
    """Handlers over a store writing to a string buffer."""
    return Commands(mock_logger, settings, FileStore(stdout=io.StringIO()))


def write(path, data):
    """Write a JSON input file and return its path."""
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


@pytest.mark.parametrize(
    "text,expected",
    [
        (None, (None, 0, 0)),
        ("exhaustive", ("exhaustive", 0, 0)),
        ("sampled:500:7", ("sampled", 500, 7)),
    ],
)
def test_parse_verify_mode(text, expected):
    """Test the accepted verify modes."""
    assert parse_verify_mode(text) == expected


@pytest.mark.parametrize("text", ["sampled", "sampled:0:1", "sampled:x:1", "all"])
def test_parse_verify_mode_rejects(text):
    """Test malformed verify modes."""
    with pytest.raises(ConfigurationError):
        parse_verify_mode(text)


def test_verdict_and_coverage_model():
    """Test row verdicts for each coverage outcome."""
    passed = CoverageReport(ok=True, mode="exhaustive", n=2, checked=4, targets=1)
    audited = CoverageReport(ok=True, mode="audit", n=30, checked=100, targets=7)
    failed = CoverageReport(
        ok=False, mode="exhaustive", n=2, checked=2, targets=1, counterexample=0b10
    )
    assert verdict(None) == "unverified"
    assert verdict(passed) == "pass"
    assert verdict(audited) == "audit-pass"
    assert verdict(failed) == "fail"
    assert coverage_model(failed).counterexample == [1]
    assert coverage_model(None) is None


def test_thresholds(commands, tmp_path):
    """Test p_c, q and q_f of ⟨{0}⟩, all equal to 1/2."""
    path = write(tmp_path / "single.json", {"n": 2, "minimal_sets": [[0]]})
    result = commands.thresholds(path)
    assert result.ok
    report = result.report
    assert isinstance(report, ThresholdsReport)
    for interval in (report.p_c, report.q, report.q_f):
        assert interval.lo.to_fraction() <= Fraction(1, 2) <= interval.hi.to_fraction()
    assert report.chain.holds
    assert [row.instance_id for row in result.rows] == ["single:p_c", "single:q", "single:q_f"]


def test_thresholds_rejects_improper_family(commands, tmp_path):
    """Test that the empty family has no threshold."""
    path = write(tmp_path / "empty.json", {"n": 2, "minimal_sets": []})
    with pytest.raises(ImproperFamilyError):
        commands.thresholds(path)


def test_cover_singleton_from_zeta(commands, tmp_path):
    """Test ζ ≡ 1, n = 9, J = 8, p = 1/16 with exhaustive coverage."""
    path = write(tmp_path / "uniform.json", {"zeta": ["1"] * 9})
    result = commands.cover_singleton("1/16", "8", zeta_path=path, verify=True)
    assert result.ok
    assert result.report.a == 2
    assert result.report.coverage.ok
    assert result.rows[0].verdict == "pass"
    assert Fraction(result.rows[0].exact) <= Fraction(result.rows[0].bound)


def test_cover_singleton_from_graph(commands, tmp_path):
    """Test ζ(v) = λ(D_v) for a graph input."""
    path = write(tmp_path / "edge.json", {"n": 2, "edges": [[0, 1, "2"]]})
    result = commands.cover_singleton("1/16", "8", graph_path=path)
    assert result.report.n == 2
    assert result.report.coverage is None
    assert result.rows[0].verdict == "unverified"


def test_cover_singleton_needs_one_source(commands, tmp_path):
    """Test that exactly one of graph and zeta is required."""
    with pytest.raises(ConfigurationError):
        commands.cover_singleton("1/16", "8")


def test_cover_graph_trivial(commands, tmp_path):
    """Test the edge-list cover of a path with T < 32."""
    edges = [[i, i + 1] for i in range(5)]
    path = write(tmp_path / "path.json", {"n": 6, "edges": edges})
    result = commands.cover_graph(path, "1/8", "22", "4", mu="1/8", verify=True)
    report = result.report
    assert result.ok
    assert report.trivial
    assert report.cost.to_fraction() == Fraction(5, 64)
    assert report.cost_exact
    assert report.coverage.ok
    assert result.rows[0].exact == "5/64"


def test_cover_weighted_single_edge(commands, tmp_path):
    """Test the reduced-guard pipeline on one edge."""
    path = write(tmp_path / "edge.json", {"n": 2, "edges": [[0, 1]]})
    result = commands.cover_weighted(path, "1/32", "32", verify="exhaustive", reduced_guard=True)
    report = result.report
    assert result.ok
    assert report.mode == "reduced-guard"
    assert [plan.piece for plan in report.plans] == ["edges"]
    assert not report.subtotals.caps_asserted
    assert report.coverage.targets == 1
    assert result.rows[0].bound == ""


def test_cover_weighted_needs_guard(commands, tmp_path):
    """Test that R = 32 needs the reduced guard."""
    path = write(tmp_path / "edge.json", {"n": 2, "edges": [[0, 1]]})
    with pytest.raises(DegenerateInstanceError):
        commands.cover_weighted(path, "1/32", "32")


def test_verify_chain(commands):
    """Test a short chain battery."""
    result = commands.verify_chain(4, 3, 1)
    assert result.ok
    assert [battery.name for battery in result.report.batteries] == ["threshold-chain"]
    assert result.rows[0].verdict == "pass"


def test_verify_chain_rejects_unknown_battery(commands):
    """Test the battery name check."""
    with pytest.raises(ConfigurationError) as exc_info:
        commands.verify_chain(4, 3, 1, ("chain", "bogus"))
    assert "bogus" in str(exc_info.value)


@pytest.mark.parametrize("n,trials", [(0, 3), (4, -1)])
def test_verify_chain_rejects_bad_sizes(commands, n, trials):
    """Test n >= 1 and trials >= 0."""
    with pytest.raises(ConfigurationError):
        commands.verify_chain(n, trials, 1)


def test_fixtures(commands):
    """Test the built-in instances and their rows."""
    result = commands.fixtures()
    names = [fixture.name for fixture in result.report.fixtures]
    assert names[:2] == ["star-union-necessity", "singleton-optimality"]
    assert len(names) == 2 + len(small_graph_battery())
    assert result.rows[1].bound == "1/6"
    assert result.rows[1].p == "1/36"


def test_check_fractional(commands, tmp_path):
    """Test a feasible fractional certificate for ⟨{0}⟩."""
    family = write(tmp_path / "family.json", {"n": 2, "minimal_sets": [[0]]})
    certificate = write(tmp_path / "cert.json", {"p": "1/4", "lambda": [[[0], "1"]]})
    result = commands.check(family, certificate, require_small=True)
    assert result.report.kind == "fractional"
    assert result.report.objective.to_fraction() == Fraction(1, 4)
    assert result.report.small
    assert result.rows[0].verdict == "small"


def test_check_integral_not_small(commands, tmp_path):
    """Test an integral certificate above 1/2 without require_small."""
    family = write(tmp_path / "family.json", {"n": 2, "minimal_sets": [[0]]})
    certificate = write(tmp_path / "cert.json", {"p": "3/4", "cover": [[0]]})
    result = commands.check(family, certificate)
    assert result.report.kind == "integral"
    assert not result.report.small
    assert result.rows[0].verdict == "not-small"


def test_check_rejects_uncovered_set(commands, tmp_path):
    """Test an integral certificate that misses the minimal set."""
    family = write(tmp_path / "family.json", {"n": 2, "minimal_sets": [[0]]})
    certificate = write(tmp_path / "cert.json", {"p": "1/4", "cover": [[1]]})
    with pytest.raises(CertificateError):
        commands.check(family, certificate)

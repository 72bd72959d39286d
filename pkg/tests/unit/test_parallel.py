"""Unit tests for the exhaustive sweep."""

from smallness_lab.domain.cover import Cover, ExplicitList
from smallness_lab.infra.parallel import sweep
from smallness_lab.service.cover_engine import CoverageChecker, MinSizeTarget


def test_sweep_counts_targets():
    """Test a passing sweep."""
    checker = CoverageChecker(Cover.of([ExplicitList(subsets=(0b01, 0b10))]), MinSizeTarget(1))
    result = sweep(checker, 2)
    assert result.ok
    assert result.checked == 4
    assert result.targets == 3


def test_sweep_stops_at_first_failure():
    """Test that the smallest failing mask is returned."""
    checker = CoverageChecker(Cover.of([ExplicitList(subsets=(0b11,))]), MinSizeTarget(1))
    result = sweep(checker, 3)
    assert result.counterexample == 0b001
    assert result.checked == 2


def test_worker_count_does_not_change_result():
    """Test identical counterexamples across worker counts."""
    cover = Cover.of([ExplicitList(subsets=(0b111,))])
    checker = CoverageChecker(cover, MinSizeTarget(12))
    serial = sweep(checker, 13, workers=1)
    parallel = sweep(checker, 13, workers=2)
    assert serial.counterexample == parallel.counterexample
    assert serial.counterexample is not None

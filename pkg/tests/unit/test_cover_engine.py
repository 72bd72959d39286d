"""Unit tests for coverage verification and smallness checks."""

from fractions import Fraction

import pytest

from smallness_lab.domain.cover import Cover, ExplicitList, PrefixBinomial
from smallness_lab.domain.errors import CapExceededError
from smallness_lab.service.cover_engine import (
    CoverageChecker,
    CoverageVerifier,
    FamilyTarget,
    MinSizeTarget,
    cost,
    smallness_check,
)


class ContainsVertex:
    """Target: subsets containing a fixed vertex."""

    def __init__(self, v):
        self.v = v

    def __call__(self, u):
        return bool(u >> self.v & 1)


class LyingPart(ExplicitList):
    """Explicit list whose members never pass replay."""

    def is_member(self, w):
        return False


def test_single_vertex_cover_verified(verifier):
    """Test {{0}} against 'contains 0' on n = 3."""
    cover = Cover.of([ExplicitList(subsets=(0b001,))])
    report = verifier.verify_coverage(cover, ContainsVertex(0), 3)
    assert report.ok
    assert report.mode == "exhaustive"
    assert report.targets == 4
    assert report.checked == 8


def test_first_counterexample_reported(verifier):
    """Test {{0,1}} against |u| >= 2: the first failure is {0,2}."""
    cover = Cover.of([ExplicitList(subsets=(0b011,))])
    report = verifier.verify_coverage(cover, MinSizeTarget(2), 3)
    assert not report.ok
    assert report.counterexample == 0b101


def test_replay_rejects_false_witness(verifier):
    """Test that witnesses are re-checked by membership."""
    cover = Cover.of([LyingPart(subsets=(0b001,))])
    assert not verifier.verify_coverage(cover, ContainsVertex(0), 2).ok
    assert verifier.verify_coverage(cover, ContainsVertex(0), 2, replay=False).ok


def test_checker_skips_non_targets():
    """Test the per-subset verdicts."""
    checker = CoverageChecker(Cover.of([ExplicitList(subsets=(0b01,))]), ContainsVertex(0))
    assert checker(0b10) is None
    assert checker(0b01) is True


def test_family_target(pair_family, verifier):
    """Test coverage of an increasing family by its own generators."""
    cover = Cover.of([ExplicitList(subsets=pair_family.minimal_sets)])
    assert verifier.verify_coverage(cover, FamilyTarget(pair_family), 3).ok


def test_cap_exceeded(mock_logger):
    """Test that exhaustive checks above the cap are refused."""
    verifier = CoverageVerifier(mock_logger, workers=1, cap=4)
    with pytest.raises(CapExceededError):
        verifier.verify_coverage(Cover.of([ExplicitList()]), MinSizeTarget(1), 5)


def test_audit_is_seeded_and_labelled(verifier):
    """Test sampled coverage runs."""
    cover = Cover.of([PrefixBinomial(order=(0, 1, 2, 3, 4, 5), a=1, kmax=6)])
    first = verifier.audit_coverage(cover, MinSizeTarget(6), 6, samples=500, seed=3)
    second = verifier.audit_coverage(cover, MinSizeTarget(6), 6, samples=500, seed=3)
    assert first == second
    assert first.mode == "audit"
    assert first.checked == 500


def test_smallness_check():
    """Test cost <= 1/2 for {{0}} at 1/2 and 51/100, and for {∅}."""
    cover = Cover.of([ExplicitList(subsets=(0b1,))])
    assert smallness_check(cover, Fraction(1, 2))
    assert not smallness_check(cover, Fraction(51, 100))
    empty_set_cover = Cover.of([ExplicitList(subsets=(0,))])
    assert cost(empty_set_cover.parts[0], Fraction(1, 2)).exact == 1
    assert not smallness_check(empty_set_cover, Fraction(1, 2))


def test_logs_failures(mock_logger):
    """Test that failed sweeps log a warning."""
    verifier = CoverageVerifier(mock_logger, workers=1)
    verifier.verify_coverage(Cover.of([ExplicitList()]), MinSizeTarget(1), 2)
    mock_logger.warning.assert_called_once()

"""Pytest configuration and fixtures."""

import os
from fractions import Fraction
from unittest.mock import Mock

import pytest

from smallness_lab.domain.family import IncreasingFamily
from smallness_lab.infra.settings import Settings
from smallness_lab.service.cover_engine import CoverageVerifier
from smallness_lab.service.threshold_solvers import ThresholdSolver

# Set test environment variables
os.environ["SMALLNESS_LAB_WORKERS"] = "1"
os.environ["LOG_FORMAT"] = "console"

TEST_TOL = Fraction(1, 1 << 16)


@pytest.fixture
def mock_logger():
    """Mock logger."""
    logger = Mock()
    logger.info.return_value = None
    logger.error.return_value = None
    logger.warning.return_value = None
    logger.debug.return_value = None
    logger.bind.return_value = logger
    return logger


@pytest.fixture
def solver(mock_logger):
    """Threshold solver with a coarse bisection tolerance."""
    return ThresholdSolver(logger=mock_logger, tol=TEST_TOL)


@pytest.fixture
def verifier(mock_logger):
    """Single-process coverage verifier."""
    return CoverageVerifier(logger=mock_logger, workers=1)


@pytest.fixture
def settings():
    """Settings for in-process command runs."""
    return Settings(workers=1, bisection_tol=TEST_TOL)


@pytest.fixture
def single_vertex_family():
    """⟨{0}⟩ on two vertices."""
    return IncreasingFamily.from_index_lists(2, [[0]])


@pytest.fixture
def pair_family():
    """⟨{0,1}⟩ on three vertices."""
    return IncreasingFamily.from_index_lists(3, [[0, 1]])


@pytest.fixture
def two_singletons_family():
    """⟨{0},{1}⟩ on two vertices."""
    return IncreasingFamily.from_index_lists(2, [[0], [1]])

"""Unit tests for settings."""

from fractions import Fraction

import pytest

from smallness_lab.domain import constants
from smallness_lab.domain.errors import ConfigurationError
from smallness_lab.infra.settings import Settings, load_settings


def test_defaults():
    """Test default values with an empty environment."""
    settings = load_settings({})
    assert settings.log_level == "INFO"
    assert settings.log_format == "console"
    assert settings.workers >= 1
    assert settings.coverage_cap == constants.COVERAGE_CAP
    assert settings.bisection_tol == constants.DEFAULT_BISECTION_TOL


def test_environment_overrides():
    """Test values read from environment names."""
    settings = load_settings(
        {
            "SMALLNESS_LAB_WORKERS": "3",
            "LOG_FORMAT": "json",
            "SMALLNESS_LAB_COVERAGE_CAP": "12",
            "SMALLNESS_LAB_BISECTION_TOL": "1/1024",
        }
    )
    assert settings.workers == 3
    assert settings.log_format == "json"
    assert settings.coverage_cap == 12
    assert settings.bisection_tol == Fraction(1, 1024)


def test_empty_values_are_ignored():
    """Test that empty variables fall back to defaults."""
    assert load_settings({"SMALLNESS_LAB_WORKERS": ""}).workers >= 1


@pytest.mark.parametrize(
    "environ",
    [
        {"LOG_FORMAT": "xml"},
        {"SMALLNESS_LAB_WORKERS": "0"},
        {"SMALLNESS_LAB_WORKERS": "many"},
        {"SMALLNESS_LAB_COVERAGE_CAP": "99"},
        {"SMALLNESS_LAB_BISECTION_TOL": "0"},
        {"SMALLNESS_LAB_BISECTION_TOL": "tiny"},
    ],
)
def test_invalid_settings(environ):
    """Test that bad values are configuration errors."""
    with pytest.raises(ConfigurationError):
        load_settings(environ)


def test_settings_accepts_fraction():
    """Test direct construction with a Fraction tolerance."""
    assert Settings(bisection_tol=Fraction(1, 8)).bisection_tol == Fraction(1, 8)

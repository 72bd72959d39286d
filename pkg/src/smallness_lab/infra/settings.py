"""Runtime settings read from the environment."""

import os
from fractions import Fraction
from typing import Mapping, Optional

from pydantic import BaseModel, Field, field_validator

from ..domain import constants
from ..domain.errors import ConfigurationError
from ..domain.rationals import parse_rational


def default_workers() -> int:
    if hasattr(os, "sched_getaffinity"):
        return len(os.sched_getaffinity(0))
    return os.cpu_count() or 1


class Settings(BaseModel):
    """Settings with defaults; every field has an environment variable."""

    log_level: str = Field(default="INFO")
    log_format: str = Field(default="console")
    workers: int = Field(default_factory=default_workers, ge=1)
    exact_measure_cap: int = Field(
        default=constants.EXACT_MEASURE_CAP, ge=1, le=constants.MAX_GROUND_SET
    )
    coverage_cap: int = Field(default=constants.COVERAGE_CAP, ge=1, le=constants.MAX_GROUND_SET)
    lp_candidate_cap: int = Field(default=constants.LP_CANDIDATE_CAP, ge=1)
    exact_lp_cap: int = Field(default=constants.EXACT_LP_CAP, ge=1)
    bisection_tol: Fraction = Field(default=constants.DEFAULT_BISECTION_TOL)

    model_config = {"arbitrary_types_allowed": True}

    @field_validator("log_format")
    @classmethod
    def validate_log_format(cls, v: str) -> str:
        """Validate log format."""
        if v not in ("console", "json"):
            raise ValueError("LOG_FORMAT must be one of: console, json")
        return v

    @field_validator("bisection_tol", mode="before")
    @classmethod
    def validate_tol(cls, v: object) -> Fraction:
        """Parse the bisection tolerance as an exact positive rational."""
        tol = parse_rational(v) if not isinstance(v, Fraction) else v
        if tol <= 0:
            raise ValueError("bisection tolerance must be positive")
        return tol


_ENV_NAMES = {
    "log_level": "LOG_LEVEL",
    "log_format": "LOG_FORMAT",
    "workers": "SMALLNESS_LAB_WORKERS",
    "exact_measure_cap": "SMALLNESS_LAB_EXACT_MEASURE_CAP",
    "coverage_cap": "SMALLNESS_LAB_COVERAGE_CAP",
    "lp_candidate_cap": "SMALLNESS_LAB_LP_CANDIDATE_CAP",
    "exact_lp_cap": "SMALLNESS_LAB_EXACT_LP_CAP",
    "bisection_tol": "SMALLNESS_LAB_BISECTION_TOL",
}


def load_settings(environ: Optional[Mapping[str, str]] = None) -> Settings:
    """Build Settings from the environment (or an explicit mapping)."""
    env = os.environ if environ is None else environ
    values = {field: env[name] for field, name in _ENV_NAMES.items() if env.get(name)}
    try:
        return Settings(**values)
    except ValueError as e:
        raise ConfigurationError(f"invalid settings: {e}") from e

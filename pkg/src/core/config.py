"""
Configuration management for db-priors.

Handles loading and validation of configuration from files and environment variables.
"""

import json
import os
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError as PydanticValidationError, model_validator

from .exceptions import ConfigError


class NumericsConfig(BaseModel):
    """Quadrature and integrability-probe settings."""

    rel_tol: float = Field(default=1e-8, gt=0.0)
    abs_tol: float = Field(default=0.0, ge=0.0)
    # Relative error accepted before a marginal or normalizer is declared failed.
    accept_rel_tol: float = Field(default=1e-6, gt=0.0)
    subdivision_limit: int = Field(default=500, gt=0)
    probe_decades: int = Field(default=8, ge=6)
    probe_rel_tol: float = Field(default=1e-6, gt=0.0)


class PriorConfig(BaseModel):
    """Gamma normalizer cache layout."""

    gamma_cache_grid: int = Field(default=241, ge=16)
    gamma_cache_bounds: Tuple[float, float] = (1e-3, 1e5)

    @model_validator(mode="after")
    def _check_bounds(self) -> "PriorConfig":
        low, high = self.gamma_cache_bounds
        if not 0.0 < low < high:
            raise ValueError("gamma_cache_bounds must satisfy 0 < low < high")
        return self


class SamplerConfig(BaseModel):
    """Random-walk Metropolis defaults."""

    steps: int = Field(default=40_000, gt=0)
    burn_in: int = Field(default=4_000, ge=0)
    proposal_scale: float = Field(default=1.0, gt=0.0)
    seed: int = Field(default=20_240_601, ge=0, lt=2**64)
    batches: int = Field(default=50, ge=2)
    min_ess: float = Field(default=100.0, gt=0.0)

    @model_validator(mode="after")
    def _check_burn_in(self) -> "SamplerConfig":
        if self.burn_in >= self.steps:
            raise ValueError("burn_in must be smaller than steps")
        return self


class AsymptoticConfig(BaseModel):
    """Monte Carlo settings of the asymptotic Bayes factor."""

    draws: int = Field(default=100_000, gt=0)
    seed: int = Field(default=20_240_602, ge=0, lt=2**64)


class OutputConfig(BaseModel):
    """Formatting of emitted tables."""

    significant_digits: int = Field(default=10, ge=3, le=17)
    report_dir: str = "reports"


class DBPriorsConfig(BaseModel):
    """Main configuration."""

    numerics: NumericsConfig = NumericsConfig()
    prior: PriorConfig = PriorConfig()
    sampler: SamplerConfig = SamplerConfig()
    asymptotic: AsymptoticConfig = AsymptoticConfig()
    output: OutputConfig = OutputConfig()
    log_level: str = "INFO"
    log_file: Optional[str] = None


# (environment variable, section, field, parser)
_ENV_OVERRIDES = (
    ("DBPRIORS_REL_TOL", "numerics", "rel_tol", float),
    ("DBPRIORS_ACCEPT_REL_TOL", "numerics", "accept_rel_tol", float),
    ("DBPRIORS_SEED", "sampler", "seed", int),
    ("DBPRIORS_STEPS", "sampler", "steps", int),
    ("DBPRIORS_BURN_IN", "sampler", "burn_in", int),
    ("DBPRIORS_DRAWS", "asymptotic", "draws", int),
    ("DBPRIORS_REPORT_DIR", "output", "report_dir", str),
)


def _apply_env_overrides(config_data: Dict[str, Any]) -> Dict[str, Any]:
    for env_name, section, field, parser in _ENV_OVERRIDES:
        raw = os.getenv(env_name)
        if raw is None:
            continue
        try:
            config_data.setdefault(section, {})[field] = parser(raw)
        except ValueError as e:
            raise ConfigError(f"Invalid value for {env_name}: {raw!r}", cause=e)

    config_data["log_level"] = os.getenv("LOG_LEVEL", config_data.get("log_level", "INFO"))
    log_file = os.getenv("LOG_FILE", config_data.get("log_file"))
    if log_file:
        config_data["log_file"] = log_file
    return config_data


def load_config(config_path: Optional[Union[str, Path]] = None) -> DBPriorsConfig:
    """Load configuration from file and environment variables.

    A ``.env`` file in the working directory is read first, so its values
    take part in the environment overrides.

    Args:
        config_path: Optional path to config file. Defaults to ``$DBPRIORS_CONFIG``.

    Returns:
        Loaded configuration.

    Raises:
        ConfigError: If the file is missing, unreadable or invalid.
    """
    load_dotenv()

    if not config_path:
        config_path = os.getenv("DBPRIORS_CONFIG")
    if not config_path:
        return DBPriorsConfig(**_apply_env_overrides({}))

    config_path = Path(config_path)
    if not config_path.exists():
        raise ConfigError(f"Config file not found: {config_path}")

    try:
        with open(config_path, encoding="utf-8") as f:
            config_data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Config file is not valid JSON: {config_path}", cause=e)

    config_data = _apply_env_overrides(config_data)

    try:
        return DBPriorsConfig(**config_data)
    except PydanticValidationError as e:
        raise ConfigError("Invalid configuration", cause=e)


def get_default_config() -> DBPriorsConfig:
    """Get default configuration.

    Returns:
        Default configuration.
    """
    return DBPriorsConfig()

"""
Core functionality for db-priors.
Configuration, the exception hierarchy and logging shared by every component.
"""

from pathlib import Path
from typing import Union

# Type aliases
PathLike = Union[str, Path]

from .config import (
    AsymptoticConfig,
    DBPriorsConfig,
    NumericsConfig,
    OutputConfig,
    PriorConfig,
    SamplerConfig,
    get_default_config,
    load_config,
)
from .exceptions import (
    ConfigError,
    DBPriorsError,
    NumericalError,
    NumericalFailure,
    PriorNotAvailableError,
    ProbeError,
    QuadratureError,
    ReportError,
    SamplerError,
    UnsupportedOperationError,
    ValidationError,
)
from .logger import TableLogger, get_logger, set_global_level, setup_logger

__all__ = [
    # Type aliases
    "PathLike",
    # Config
    "DBPriorsConfig",
    "NumericsConfig",
    "PriorConfig",
    "SamplerConfig",
    "AsymptoticConfig",
    "OutputConfig",
    "load_config",
    "get_default_config",
    # Logger
    "setup_logger",
    "set_global_level",
    "get_logger",
    "TableLogger",
    # Exceptions
    "DBPriorsError",
    "ConfigError",
    "ReportError",
    "ValidationError",
    "UnsupportedOperationError",
    "PriorNotAvailableError",
    "NumericalFailure",
    "NumericalError",
    "QuadratureError",
    "SamplerError",
    "ProbeError",
]

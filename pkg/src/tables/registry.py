"""
Registry of reproduction targets.

A target is a function ``(options, config) -> TableReport`` registered under a
name with :func:`register_target`; :func:`reproduce` times it and logs the
run.
"""

import time
from enum import Enum
from typing import Callable, Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from ..core.config import DBPriorsConfig, get_default_config
from ..core.exceptions import ValidationError
from ..core.logger import TableLogger
from ..reporter import TableReport


class TargetName(str, Enum):
    TABLE1 = "table1"
    TABLE2 = "table2"
    TABLE3 = "table3"
    TABLE4 = "table4"
    TABLE5 = "table5"
    TABLE6 = "table6"
    FIG_B0_EXP = "fig_b0_exp"
    FIG_B1_NORMAL = "fig_b1_normal"
    FIG_B0_IRREGULAR = "fig_b0_irregular"
    FIG_B0_MIXTURE = "fig_b0_mixture"
    PRIOR_FIGURES = "prior_figures"


class TargetOptions(BaseModel):
    """Knobs shared by the targets; each target reads the ones it needs."""

    model_config = ConfigDict(frozen=True)

    n_max: Optional[int] = Field(default=None, ge=2)
    mcmc: bool = False
    seed: Optional[int] = Field(default=None, ge=0)
    draws: Optional[int] = Field(default=None, gt=0)


TargetFn = Callable[[TargetOptions, DBPriorsConfig, TableLogger], TableReport]

_TARGETS: Dict[TargetName, TargetFn] = {}


def register_target(name: TargetName) -> Callable[[TargetFn], TargetFn]:
    def decorator(fn: TargetFn) -> TargetFn:
        if name in _TARGETS:
            raise ValueError(f"target {name.value} registered twice")
        _TARGETS[name] = fn
        return fn

    return decorator


def target_names() -> Tuple[str, ...]:
    return tuple(t.value for t in TargetName)


def reproduce(
    target: str,
    options: Optional[TargetOptions] = None,
    config: Optional[DBPriorsConfig] = None,
) -> TableReport:
    """Compute a reproduction target.

    Raises:
        ValidationError: If the target is unknown.
    """
    try:
        name = TargetName(target)
    except ValueError:
        raise ValidationError(
            f"unknown target; expected one of {', '.join(target_names())}", field="target", value=target
        ) from None
    options = options or TargetOptions()
    config = config or get_default_config()
    table_logger = TableLogger(name.value, level=config.log_level)

    start = time.perf_counter()
    report = _TARGETS[name](options, config, table_logger)
    report.duration = time.perf_counter() - start
    table_logger.end_target(len(report.frame), report.duration)
    return report

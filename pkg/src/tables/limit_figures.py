"""
Evidence-limit curves as functions of the sample size.
"""

from typing import Any, Dict, List

import pandas as pd

from ..bayes import LimitKind, evidence_limit
from ..core.config import DBPriorsConfig
from ..core.logger import TableLogger
from ..models.families import get_family
from ..reporter import TableReport
from .common import COLUMN_LABELS, PriorCache
from .registry import TargetName, TargetOptions, register_target

MIXTURE_WEIGHTS = (0.25, 0.5, 0.75)


def _curve_rows(
    cache: PriorCache,
    family: Any,
    prior_ids: Any,
    theta0: Any,
    n_values: range,
    which: LimitKind,
    table_logger: TableLogger,
    prefix: str,
) -> List[Dict[str, Any]]:
    priors = {p: cache.get(family, p, theta0) for p in prior_ids}
    rows = []
    for n in n_values:
        row: Dict[str, Any] = {"n": n}
        for prior_id, prior in priors.items():
            value = evidence_limit(family, prior, n, which, config=cache.config)
            table_logger.log_cell(f"n={n}, {prior_id}", value, which.value)
            row[f"{prefix}_{COLUMN_LABELS[prior_id]}"] = value
        rows.append(row)
    return rows


@register_target(TargetName.FIG_B0_EXP)
def fig_b0_exp(options: TargetOptions, config: DBPriorsConfig, table_logger: TableLogger) -> TableReport:
    """B⁰(n) of the exponential test for the four priors; scale-free, computed at μ0 = 1."""
    family = get_family("exponential_scale")
    n_values = range(1, (options.n_max or 100) + 1)
    prior_ids = ("sum-db", "min-db", "arithmetic", "fractional")
    table_logger.start_target(len(n_values) * len(prior_ids))
    rows = _curve_rows(
        PriorCache(config), family, prior_ids, 1.0, n_values, LimitKind.B0_NULL_BOUNDARY, table_logger, "B0"
    )
    return TableReport(target=TargetName.FIG_B0_EXP.value, frame=pd.DataFrame(rows))


@register_target(TargetName.FIG_B1_NORMAL)
def fig_b1_normal(options: TargetOptions, config: DBPriorsConfig, table_logger: TableLogger) -> TableReport:
    """B¹(n) of the normal location-scale test from the mixing densities."""
    family = get_family("normal_locscale")
    n_values = range(2, (options.n_max or 30) + 1)
    prior_ids = ("sum-db", "arithmetic", "fractional")
    table_logger.start_target(len(n_values) * len(prior_ids))
    rows = _curve_rows(
        PriorCache(config), family, prior_ids, (0.0, 1.0), n_values, LimitKind.B1_NULL_POINT, table_logger, "B1"
    )
    return TableReport(target=TargetName.FIG_B1_NORMAL.value, frame=pd.DataFrame(rows))


@register_target(TargetName.FIG_B0_IRREGULAR)
def fig_b0_irregular(options: TargetOptions, config: DBPriorsConfig, table_logger: TableLogger) -> TableReport:
    """B⁰(n) = lim B12 as T → θ0 for the two-sided irregular test under the min-DB prior."""
    family = get_family("shifted_exponential", side="two_sided")
    n_values = range(1, (options.n_max or 100) + 1)
    table_logger.start_target(len(n_values))
    rows = _curve_rows(
        PriorCache(config), family, ("min-db",), 0.0, n_values, LimitKind.B0_NULL_BOUNDARY, table_logger, "B0"
    )
    return TableReport(target=TargetName.FIG_B0_IRREGULAR.value, frame=pd.DataFrame(rows))


@register_target(TargetName.FIG_B0_MIXTURE)
def fig_b0_mixture(options: TargetOptions, config: DBPriorsConfig, table_logger: TableLogger) -> TableReport:
    """B⁰(n, p) at the all-zero sample for the SL, ap and BP priors, one block of rows per p."""
    n_values = range(1, (options.n_max or 30) + 1)
    prior_ids = ("sum-db", "mixture-cauchy", "bp-cauchy")
    table_logger.start_target(len(n_values) * len(prior_ids) * len(MIXTURE_WEIGHTS))
    cache = PriorCache(config)

    rows = []
    for p in MIXTURE_WEIGHTS:
        family = get_family("normal_mixture", p=p, divergence_mode="laplace")
        for row in _curve_rows(cache, family, prior_ids, 0.0, n_values, LimitKind.B0_NULL_BOUNDARY, table_logger, "B0"):
            row["p"] = p
            rows.append(row)

    frame = pd.DataFrame(rows).rename(columns={"B0_S": "B0_SL"})
    frame = frame[["p", "n", "B0_SL", "B0_ap", "B0_BP"]]
    return TableReport(target=TargetName.FIG_B0_MIXTURE.value, frame=frame)

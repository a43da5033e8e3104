"""
Which divisor turns the reported normal spread S into a sum of squares.

Published normal-testing tables quote (ȳ, S) without saying whether
S² = SS/n or SS/(n - 1). The resolver evaluates the reference cell
(ȳ = 0, S = 1, n = 10 at (μ0, σ0) = (0, 1)) under both readings and keeps the
one closest to the published values.
"""

import functools
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from ..core.config import DBPriorsConfig, get_default_config
from ..core.logger import get_logger
from ..models.families import get_family
from ..models.stats import NormalStats
from .factors import bayes_factor, resolve_prior

logger = get_logger(__name__)

CONVENTIONS = ("mle", "unbiased")
REFERENCE_PRIORS = ("sum-db", "arithmetic", "fractional")
# (ȳ = 0, S = 1, n = 10): sum-DB, arithmetic intrinsic, fractional intrinsic
REFERENCE_VALUES = (18.67, 18.55, 11.72)


@dataclass(frozen=True)
class ConventionVerdict:
    """Chosen convention with the reference cell under every candidate."""

    convention: str
    values: Dict[str, Tuple[float, ...]]
    distances: Dict[str, float]


def _reference_cell(convention: str, config: DBPriorsConfig) -> Tuple[float, ...]:
    family = get_family("normal_locscale")
    stats = NormalStats(n=10, ybar=0.0, s=1.0, s_convention=convention)
    return tuple(
        bayes_factor(family, resolve_prior(family, prior_id, (0.0, 1.0), config=config), stats, config=config).bf12
        for prior_id in REFERENCE_PRIORS
    )


def _distance(values: Tuple[float, ...]) -> float:
    return max(abs(v - target) / target for v, target in zip(values, REFERENCE_VALUES))


def resolve_s_convention(config: Optional[DBPriorsConfig] = None) -> ConventionVerdict:
    """Pick ``mle`` or ``unbiased`` by the worst relative miss on the reference cell."""
    return _resolve((config or get_default_config()).model_dump_json())


@functools.lru_cache(maxsize=4)
def _resolve(config_json: str) -> ConventionVerdict:
    config = DBPriorsConfig.model_validate_json(config_json)
    values = {c: _reference_cell(c, config) for c in CONVENTIONS}
    distances = {c: _distance(v) for c, v in values.items()}
    chosen = min(CONVENTIONS, key=lambda c: distances[c])
    logger.info(f"S convention: {chosen} (worst relative miss {distances[chosen]:.3g})")
    return ConventionVerdict(convention=chosen, values=values, distances=distances)

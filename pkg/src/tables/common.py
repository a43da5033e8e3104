"""
Helpers shared by the table targets.
"""

from typing import Any, Dict, Tuple

from ..bayes import BFResult, bayes_factor, resolve_prior
from ..bayes.factors import Prior
from ..core.config import DBPriorsConfig
from ..core.logger import TableLogger
from ..models.families import FamilyDescriptor, Param
from ..models.stats import SuffStats

# prior id -> column suffix in the published tables
COLUMN_LABELS = {
    "sum-db": "S",
    "min-db": "M",
    "arithmetic": "A",
    "fractional": "F",
    "bp-cauchy": "BP",
    "mixture-cauchy": "ap",
}


def _theta_key(theta0: Param) -> Tuple[float, ...]:
    if isinstance(theta0, tuple):
        return tuple(float(v) for v in theta0)
    return (float(theta0),)  # type: ignore[arg-type]


class PriorCache:
    """Builds each (family, prior, θ0) once per target."""

    def __init__(self, config: DBPriorsConfig) -> None:
        self.config = config
        self._priors: Dict[Tuple[Any, ...], Prior] = {}

    def get(self, family: FamilyDescriptor, prior_id: str, theta0: Param) -> Prior:
        key = (family.cache_key, prior_id, _theta_key(theta0))
        if key not in self._priors:
            self._priors[key] = resolve_prior(family, prior_id, theta0, config=self.config)
        return self._priors[key]

    def bayes_factor(
        self,
        family: FamilyDescriptor,
        prior_id: str,
        theta0: Param,
        stats: SuffStats,
        table_logger: TableLogger,
        label: str,
    ) -> BFResult:
        result = bayes_factor(family, self.get(family, prior_id, theta0), stats, config=self.config)
        table_logger.log_cell(f"{label}, {prior_id}", result.bf12, result.method.value)
        return result


def with_seed(config: DBPriorsConfig, seed: Any) -> DBPriorsConfig:
    """Copy of ``config`` whose sampler and Monte Carlo seeds are ``seed``."""
    if seed is None:
        return config
    return config.model_copy(
        update={
            "sampler": config.sampler.model_copy(update={"seed": int(seed)}),
            "asymptotic": config.asymptotic.model_copy(update={"seed": int(seed)}),
        }
    )

"""
Divergence-based priors π^D(θ|ν) = c(q★, ν)^-1 (1 + D̄[θ, θ0])^-q★ π^N(θ|ν).
"""

import functools
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from ..core.config import DBPriorsConfig, get_default_config
from ..core.exceptions import ValidationError
from ..core.logger import get_logger
from ..divergence import DivergenceKind, UnitaryDivergence, unitary
from ..models.families import FamilyDescriptor, GammaMean, LinearModel, Param
from .kernels import DEFAULT_DELTA, log_poly_kernel
from .normalizers import ConditionalNormalizer, gamma_conditional_normalizer, log_db_normalizer
from .tail_index import q_lower

logger = get_logger(__name__)

Normalizer = Union[float, Callable[[float], float]]


def _conditional_normalizer(
    family: FamilyDescriptor, kind: DivergenceKind, theta0: Param, q: float, nu: float
) -> float:
    return math.exp(log_db_normalizer(family, kind, theta0, q, nu))


@dataclass(frozen=True, eq=False)
class DBPrior:
    """A built DB prior.

    ``normalizer`` is c(q★) for families without a nuisance parameter and the
    function ν ↦ c(q★, ν) otherwise.
    """

    family: FamilyDescriptor
    kind: DivergenceKind
    theta0: Param
    q_lower: float
    q_star: float
    normalizer: Normalizer
    divergence: UnitaryDivergence = field(repr=False)

    @property
    def prior_id(self) -> str:
        return f"{self.kind.value}-db"

    def log_normalizer(self, nu: Optional[float] = None, exact: bool = False) -> float:
        if isinstance(self.normalizer, ConditionalNormalizer):
            return self.normalizer.log_value(float(nu), exact=exact)  # type: ignore[arg-type]
        if callable(self.normalizer):
            return math.log(self.normalizer(nu))  # type: ignore[arg-type]
        return math.log(self.normalizer)

    def log_kernel(self, theta: Param, nu: Optional[float] = None) -> float:
        """log h_{q★}(D̄[θ, θ0]) + log π^N(θ|ν); ``-inf`` outside Θ."""
        if not self.family.in_support(theta, self.theta0):
            return -math.inf
        return log_poly_kernel(self.divergence(theta, nu), self.q_star) + self.family.log_reference_theta(theta, nu)

    def log_density(self, theta: Param, nu: Optional[float] = None, exact: bool = False) -> float:
        """Normalized log-density, conditional on ``nu`` for nuisance families.

        ``exact`` bypasses the interpolated gamma normalizer.
        """
        nu = self.family.require_nu(nu)
        value = self.log_kernel(theta, nu)
        if value == -math.inf:
            return value
        return value - self.log_normalizer(nu, exact=exact)

    def density(self, theta: Param, nu: Optional[float] = None, exact: bool = True) -> float:
        return math.exp(self.log_density(theta, nu, exact=exact))

    def log_chart_density(self, u: float, nu: Optional[float] = None, exact: bool = False) -> float:
        """Log-density of the chart coordinate ``u`` of a scalar θ.

        Log-scale families are evaluated from ``u - log θ0`` directly, so the
        polynomial tails stay exact where θ = e^u leaves the float range.
        """
        family = self.family
        chart = family.chart(theta0=self.theta0)
        if not family.log_scale:
            theta = chart.to_theta(u)
            if not math.isfinite(theta):
                return -math.inf
            value = self.log_density(theta, nu, exact=exact)
            return value if value == -math.inf else value + chart.log_jacobian(u)
        nu = family.require_nu(nu)
        x = u - chart.from_theta(float(self.theta0))  # type: ignore[arg-type]
        return log_poly_kernel(self.divergence.at_log_ratio(x, nu), self.q_star) - self.log_normalizer(nu, exact=exact)


def build(
    family: FamilyDescriptor,
    kind: Union[str, DivergenceKind],
    theta0: Param,
    *,
    delta: float = DEFAULT_DELTA,
    config: Optional[DBPriorsConfig] = None,
) -> DBPrior:
    """Build the DB prior of ``kind`` for ``family`` at the null ``theta0``.

    Args:
        family: Sampling family.
        kind: ``sum`` or ``min`` (also ``sum-db`` / ``min-db``).
        theta0: Null value; ``(mu0, sigma0)`` for the normal location-scale
            family, a zero vector for the linear model.
        delta: Offset of q★ over the tail index.
        config: Numerical settings; defaults when omitted.

    Returns:
        The normalized prior.

    Raises:
        PriorNotAvailableError: If the prior does not exist for the family.
        ProbeError: If the tabulated tail index fails verification.
        QuadratureError: If the normalizer does not converge.
    """
    config = config or get_default_config()
    if not delta > 0.0:
        raise ValidationError("delta must be positive", field="delta", value=delta)
    divergence = unitary(family, kind, theta0)
    kind = divergence.kind
    if isinstance(family, LinearModel):
        theta0 = np.atleast_1d(np.asarray(theta0, dtype=float))
        if np.any(theta0 != 0.0):
            raise ValidationError("the linear-model null is beta_e = 0", field="theta0")

    numerics = config.numerics
    lower = q_lower(family, kind, theta0, decades=numerics.probe_decades, rel_tol=numerics.probe_rel_tol)
    q_star = lower + delta
    tolerances = {"rel_tol": numerics.rel_tol, "accept_rel_tol": numerics.accept_rel_tol}

    normalizer: Normalizer
    if isinstance(family, GammaMean):
        normalizer = gamma_conditional_normalizer(
            family,
            kind,
            float(theta0),  # type: ignore[arg-type]
            q_star,
            grid=config.prior.gamma_cache_grid,
            bounds=config.prior.gamma_cache_bounds,
            **tolerances,
        )
    elif isinstance(family, LinearModel):
        normalizer = functools.partial(_conditional_normalizer, family, kind, theta0, q_star)
    else:
        normalizer = math.exp(log_db_normalizer(family, kind, theta0, q_star, **tolerances))

    logger.debug(f"built {kind.value} prior for {family.label}: q_lower={lower} q_star={q_star}")
    return DBPrior(
        family=family,
        kind=kind,
        theta0=theta0,
        q_lower=lower,
        q_star=q_star,
        normalizer=normalizer,
        divergence=divergence,
    )


def density(prior: DBPrior, theta: Param, nu: Optional[float] = None) -> float:
    """Exact normalized density of ``prior`` at ``theta`` (given ``nu``).

    Raises:
        ValidationError: If ``nu`` is missing for a nuisance family or given
            for one without.
    """
    return prior.density(theta, nu, exact=True)

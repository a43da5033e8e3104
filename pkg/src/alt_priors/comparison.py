"""
Comparison priors: intrinsic, Jeffreys-rule and Cauchy proposals.
"""

import functools
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Optional, Tuple, Union

import numpy as np

from ..core.exceptions import PriorNotAvailableError, UnsupportedOperationError, ValidationError
from ..core.logger import get_logger
from ..db_prior.approx import approx_db_prior
from ..models.families import FamilyDescriptor, FamilyId, LinearModel, NormalLocScale, Param
from ..numerics.quadrature import DEFAULT_ACCEPT_REL_TOL, Interval, integrate_log
from .intrinsic import ARITHMETIC, FRACTIONAL, intrinsic_log_density_fn, normal_mu_conditional
from .jeffreys import jeffreys_rule_log_density_fn

logger = get_logger(__name__)

LOG_PI = math.log(math.pi)


class ComparisonPriorId(str, Enum):
    """Comparison priors and their table column labels."""

    ARITHMETIC_INTRINSIC = "arithmetic_intrinsic"
    FRACTIONAL_INTRINSIC = "fractional_intrinsic"
    JEFFREYS_RULE = "jeffreys_rule"
    BP_CAUCHY = "bp_cauchy"
    MIXTURE_CAUCHY = "mixture_cauchy"
    JZS = "jzs"

    @property
    def label(self) -> str:
        return _LABELS[self]

    @classmethod
    def parse(cls, name: Union[str, "ComparisonPriorId"]) -> "ComparisonPriorId":
        """Accept ids, CLI spellings (``jeffreys-rule``) and short forms (``arithmetic``, ``ap``)."""
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("-", "_")
        key = _SHORT_FORMS.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ValidationError("unknown comparison prior", field="prior", value=name) from None


_LABELS = {
    ComparisonPriorId.ARITHMETIC_INTRINSIC: "A",
    ComparisonPriorId.FRACTIONAL_INTRINSIC: "F",
    ComparisonPriorId.JEFFREYS_RULE: "J",
    ComparisonPriorId.BP_CAUCHY: "BP",
    ComparisonPriorId.MIXTURE_CAUCHY: "ap",
    ComparisonPriorId.JZS: "JZS",
}

_SHORT_FORMS = {
    "arithmetic": "arithmetic_intrinsic",
    "fractional": "fractional_intrinsic",
    "jeffreys": "jeffreys_rule",
    "bp": "bp_cauchy",
    "ap": "mixture_cauchy",
}


@dataclass(frozen=True, eq=False)
class ComparisonPrior:
    """Closed-form comparison prior on the tested parameter.

    ``total_mass`` is 1 for proper priors; improper ones keep their mass so
    that Bayes factors use the unnormalized density.
    """

    prior_id: ComparisonPriorId
    family: FamilyDescriptor
    theta0: Param
    log_density_fn: Callable[..., float] = field(repr=False)
    is_proper: bool = True
    total_mass: float = 1.0
    # σ ↦ (log π(σ), mean, var) when π(μ|σ) is normal
    mu_given_sigma: Optional[Callable[[float], Tuple[float, float, float]]] = field(default=None, repr=False)

    @property
    def label(self) -> str:
        return self.prior_id.label

    def log_density(self, theta: Param, nu: Optional[float] = None, exact: bool = True) -> float:
        nu = self.family.require_nu(nu)
        return float(self.log_density_fn(theta, nu))

    def density(self, theta: Param, nu: Optional[float] = None, exact: bool = True) -> float:
        return math.exp(self.log_density(theta, nu))


def _log_cauchy(x: float, loc: float, scale: float) -> float:
    z = (x - loc) / scale
    return -LOG_PI - math.log(scale) - math.log1p(z * z)


def bp_cauchy_density(mu: float) -> float:
    """Standard Cauchy density Ca(μ | 0, 1)."""
    return math.exp(_log_cauchy(float(mu), 0.0, 1.0))


def mixture_cauchy_density(mu: float, p: float) -> float:
    """Ca(μ | 0, scale² = 1/(1 - p)), the Fisher approximation of the mixture sum-DB prior."""
    return math.exp(_log_cauchy(float(mu), 0.0, 1.0 / math.sqrt(1.0 - p)))


def _require_mixture(family: FamilyDescriptor, prior_id: ComparisonPriorId) -> None:
    if family.family_id is not FamilyId.NORMAL_MIXTURE:
        raise PriorNotAvailableError(
            "the Cauchy proposal is defined for the normal mixture", family=family.label, prior=prior_id.value
        )


def _jzs_log_density_fn(family: LinearModel) -> Callable[..., float]:
    k = family.geometry.k_e

    def log_density(theta: Param, nu: Optional[float] = None) -> float:
        return approx_db_prior(family, np.zeros(k), nu).log_density(theta)

    return log_density


def comparison_prior(
    prior_id: Union[str, ComparisonPriorId],
    family: FamilyDescriptor,
    theta0: Param,
    *,
    compute_mass: bool = True,
) -> ComparisonPrior:
    """Build a comparison prior for ``family`` at ``theta0``.

    Args:
        prior_id: Prior id or short form.
        family: Sampling family.
        theta0: Null value.
        compute_mass: Integrate improper priors to record their total mass.

    Returns:
        The comparison prior.

    Raises:
        PriorNotAvailableError: If the prior has no closed form for the family.
        UnsupportedOperationError: If the Jeffreys rule does not apply.
    """
    prior_id = ComparisonPriorId.parse(prior_id)
    family.validate_theta(theta0, theta0)

    if prior_id in (ComparisonPriorId.ARITHMETIC_INTRINSIC, ComparisonPriorId.FRACTIONAL_INTRINSIC):
        kind = ARITHMETIC if prior_id is ComparisonPriorId.ARITHMETIC_INTRINSIC else FRACTIONAL
        closed_form = intrinsic_log_density_fn(kind, family)

        def log_density(theta: Param, nu: Optional[float] = None) -> float:
            return closed_form(family, theta0, theta)

        improper = family.family_id is FamilyId.BERNOULLI and kind == FRACTIONAL
        conditional = None
        if isinstance(family, NormalLocScale):
            conditional = functools.partial(normal_mu_conditional, kind, theta0)
        prior = ComparisonPrior(
            prior_id, family, theta0, log_density, is_proper=not improper, mu_given_sigma=conditional
        )
        if improper and compute_mass:
            mass = total_mass(prior)
            logger.debug(f"fractional prior for {family.label} at {theta0} has mass {mass:.6g}")
            prior = ComparisonPrior(prior_id, family, theta0, log_density, is_proper=False, total_mass=mass)
        return prior

    if prior_id is ComparisonPriorId.JEFFREYS_RULE:
        return ComparisonPrior(prior_id, family, theta0, jeffreys_rule_log_density_fn(family, float(theta0)))

    if prior_id is ComparisonPriorId.BP_CAUCHY:
        _require_mixture(family, prior_id)
        return ComparisonPrior(prior_id, family, theta0, lambda theta, nu=None: _log_cauchy(float(theta), 0.0, 1.0))

    if prior_id is ComparisonPriorId.MIXTURE_CAUCHY:
        _require_mixture(family, prior_id)
        scale = 1.0 / math.sqrt(1.0 - family.p)  # type: ignore[attr-defined]
        return ComparisonPrior(prior_id, family, theta0, lambda theta, nu=None: _log_cauchy(float(theta), 0.0, scale))

    if not isinstance(family, LinearModel):
        raise PriorNotAvailableError(
            "the JZS prior is defined for the linear model", family=family.label, prior=prior_id.value
        )
    return ComparisonPrior(prior_id, family, theta0, _jzs_log_density_fn(family))


def _scalar_chart(family: FamilyDescriptor, theta0: Param):
    chart = family.chart(theta0=theta0)
    u0 = chart.from_theta(float(theta0))
    hint = u0 if chart.domain.contains(u0) else None
    return chart, hint


def total_mass(prior: Any, nu: Optional[float] = None, rel_tol: float = 1e-9) -> float:
    """∫ density over the parameter space, conditional on ``nu``.

    Works for DB and comparison priors. Vector parameters other than the
    normal (μ, σ) pair are not supported.

    Raises:
        QuadratureError: If the integral misses the accepted tolerance.
    """
    family = prior.family
    if isinstance(family, NormalLocScale) and family.known_sigma is None:
        mu0, sigma0 = (float(v) for v in prior.theta0)

        def log_sigma_slice(z: float) -> float:
            if abs(z) > 700.0:
                return -math.inf
            sigma = math.exp(z)
            inner = integrate_log(
                lambda mu: prior.log_density((mu, sigma), exact=True),
                Interval.real_line(),
                rel_tol,
                hint=mu0,
                hint_scale=max(sigma, sigma0),
            )
            return inner.require(DEFAULT_ACCEPT_REL_TOL, "inner mass integral") + z

        result = integrate_log(log_sigma_slice, Interval.real_line(), rel_tol, hint=math.log(sigma0))
        return math.exp(result.require(DEFAULT_ACCEPT_REL_TOL, "prior mass"))

    if family.theta_dim != 1:
        raise UnsupportedOperationError(
            "total mass is computed for scalar parameters and (mu, sigma)", family=family.label
        )

    chart, hint = _scalar_chart(family, prior.theta0)
    chart_density = getattr(prior, "log_chart_density", None)

    def log_f(u: float) -> float:
        if chart_density is not None:
            return chart_density(u, nu, exact=True)
        theta = chart.to_theta(u)
        if not (family.in_support(theta, prior.theta0) and math.isfinite(theta)):
            return -math.inf
        return prior.log_density(theta, nu, exact=True) + chart.log_jacobian(u)

    result = integrate_log(log_f, chart.domain, rel_tol, hint=hint, hint_scale=1.0)
    return math.exp(result.require(DEFAULT_ACCEPT_REL_TOL, f"mass of {family.label} prior"))

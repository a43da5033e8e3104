"""
Marginal likelihoods m(y) = ∫ f(y|θ, ν) π(θ|ν) π^N(ν) dθ dν.

Scalar parameters are integrated in the family chart. The normal (μ, σ) pair
is integrated with μ inside and log σ outside; the gamma family integrates
log μ inside and log α outside, with the improper π^N(α) = √(ψ1(α) - 1/α)
whose constant cancels in Bayes factors. Outer slices whose profile
log-likelihood lies more than ``PROFILE_CUTOFF`` below the maximum are
dropped; the log α range is cut to that window before integrating.
"""

import math
from dataclasses import dataclass
from typing import Any, Callable, Optional

from scipy.optimize import brentq

from ..core.config import NumericsConfig
from ..core.exceptions import UnsupportedOperationError, ValidationError
from ..core.logger import get_logger
from ..models.families import (
    FamilyDescriptor,
    GammaMean,
    LinearModel,
    NormalLocScale,
    Param,
    ShiftedExponential,
)
from ..models.stats import SuffStats
from ..numerics.quadrature import Interval, integrate_log, locate_peak
from .results import PointNull

logger = get_logger(__name__)

PROFILE_CUTOFF = 200.0
INNER_GRID = 101
OUTER_GRID = 161
MAX_LOG_NUISANCE = 700.0

LogPrior = Callable[[Param, Optional[float]], float]


@dataclass(frozen=True)
class ReferenceModel:
    """The alternative under the estimation prior π^N(θ|ν) π^N(ν).

    The prior is improper in general, so its marginal is only meaningful in
    a ratio with another marginal sharing the same constants.
    """

    family: FamilyDescriptor
    theta0: Optional[Param] = None
    label: str = "reference"

    def log_density(self, theta: Param, nu: Optional[float] = None, exact: bool = False) -> float:
        if not self.family.in_support(theta, self.theta0):
            return -math.inf
        return self.family.log_reference_theta(theta, nu)

    def log_chart_density(self, u: float, nu: Optional[float] = None, exact: bool = False) -> float:
        if self.family.log_scale:
            # π^N(θ|ν) dθ = du
            return 0.0
        chart = self.family.chart(theta0=self.theta0)
        theta = chart.to_theta(u)
        if not math.isfinite(theta):
            return -math.inf
        value = self.log_density(theta, nu)
        return value if value == -math.inf else value + chart.log_jacobian(u)


@dataclass(frozen=True)
class LogMarginal:
    """log m(y) and a relative error bound."""

    log_value: float
    rel_err: float

    @property
    def value(self) -> float:
        return math.exp(self.log_value)


def _log_prior_fn(prior: Any) -> LogPrior:
    def log_prior(theta: Param, nu: Optional[float]) -> float:
        # inexact: the gamma normalizer is read from its interpolation grid
        return prior.log_density(theta, nu, exact=False)

    return log_prior


def _numerics(config: Optional[NumericsConfig]) -> NumericsConfig:
    return config or NumericsConfig()


def _scalar(
    family: FamilyDescriptor,
    prior: Any,
    stats: SuffStats,
    theta0: Optional[Param],
    numerics: NumericsConfig,
) -> LogMarginal:
    chart = family.chart(stats, theta0)
    log_chart_prior = _log_chart_prior_fn(prior, family)
    hint, width = family.mle_hint(stats)
    if not chart.domain.contains(hint):
        # irregular family: the MLE is the end point T of the chart
        hint = None

    def log_f(u: float) -> float:
        theta = chart.to_theta(u)
        if not (math.isfinite(theta) and family.in_support(theta, theta0)):
            return -math.inf
        prior_value = log_chart_prior(u, None)
        if prior_value == -math.inf:
            return prior_value
        return family.loglik(theta, stats) + prior_value

    result = integrate_log(
        log_f, chart.domain, numerics.rel_tol, hint=hint, hint_scale=width, limit=numerics.subdivision_limit
    )
    return LogMarginal(result.require(numerics.accept_rel_tol, f"marginal of {family.label}"), result.rel_err)


class _InnerErrors:
    """Largest relative error met by the inner integrals of a nested marginal."""

    def __init__(self) -> None:
        self.worst = 0.0

    def record(self, rel_err: float) -> None:
        self.worst = max(self.worst, rel_err)


def _normal(
    family: NormalLocScale,
    prior: Any,
    stats: SuffStats,
    numerics: NumericsConfig,
) -> LogMarginal:
    """(μ, σ) marginal: μ inside, z = log σ outside.

    Priors that are normal in μ given σ (``mu_given_sigma``) get the μ-integral
    in closed form.
    """
    n = stats.n
    s_hat = math.sqrt(stats.sum_squares / n)
    profile_max = family.loglik((stats.ybar, s_hat), stats)
    log_prior = _log_prior_fn(prior)
    conditional = getattr(prior, "mu_given_sigma", None)
    theta0 = getattr(prior, "theta0", None)
    inner_points = [stats.ybar] if theta0 is None else sorted({stats.ybar, float(theta0[0])})
    inner_errors = _InnerErrors()

    def log_outer(z: float) -> float:
        if abs(z) > 700.0:
            return -math.inf
        sigma = math.exp(z)
        profile = family.loglik((stats.ybar, sigma), stats)
        if not profile >= profile_max - PROFILE_CUTOFF:
            return -math.inf

        if conditional is not None:
            log_sigma_prior, mean, var = conditional(sigma)
            # N(μ | mean, var) against the likelihood's N(ȳ | μ, σ²/n) factor
            spread = var + sigma * sigma / n
            gap = stats.ybar - mean
            log_inner = 0.5 * (2.0 * z - math.log(n) - math.log(spread)) - 0.5 * gap * gap / spread
            return profile + log_inner + log_sigma_prior + z

        def log_inner_mu(mu: float) -> float:
            theta = (mu, sigma)
            prior_value = log_prior(theta, None)
            if prior_value == -math.inf:
                return prior_value
            return family.loglik(theta, stats) + prior_value

        inner = integrate_log(
            log_inner_mu,
            Interval.real_line(),
            numerics.rel_tol,
            hint=stats.ybar,
            hint_scale=sigma / math.sqrt(n),
            grid_size=INNER_GRID,
            limit=numerics.subdivision_limit,
            allow_zero=True,
            points=inner_points,
        )
        inner_errors.record(inner.rel_err)
        return inner.require(numerics.accept_rel_tol, "normal marginal over mu") + z

    result = integrate_log(
        log_outer,
        Interval.real_line(),
        numerics.rel_tol,
        hint=math.log(s_hat),
        hint_scale=1.0 / math.sqrt(2.0 * n),
        grid_size=OUTER_GRID,
        limit=numerics.subdivision_limit,
    )
    log_value = result.require(numerics.accept_rel_tol, "normal marginal over log sigma")
    return LogMarginal(log_value, result.rel_err + inner_errors.worst)


def _log_chart_prior_fn(prior: Any, family: FamilyDescriptor) -> LogPrior:
    """log π(u|ν) in the chart coordinate u of a scalar θ."""
    chart_density = getattr(prior, "log_chart_density", None)
    if chart_density is not None:

        def log_chart_prior(u: float, nu: Optional[float]) -> float:
            return chart_density(u, nu, exact=False)

        return log_chart_prior

    chart = family.chart(theta0=getattr(prior, "theta0", None))
    log_prior = _log_prior_fn(prior)

    def log_chart_prior_from_theta(u: float, nu: Optional[float]) -> float:
        theta = chart.to_theta(u)
        if not (math.isfinite(theta) and family.in_support(theta)):
            return -math.inf
        value = log_prior(theta, nu)
        return value if value == -math.inf else value + chart.log_jacobian(u)

    return log_chart_prior_from_theta


def _profile_window(profile: Callable[[float], float], hint: float, hint_scale: float) -> Interval:
    """Interval around the maximum of ``profile`` where it stays within PROFILE_CUTOFF of it.

    ``profile`` must be unimodal and ``-inf`` for ``|w| > MAX_LOG_NUISANCE``.
    """
    peak = locate_peak(profile, Interval.real_line(), hint=hint, hint_scale=hint_scale, grid_size=OUTER_GRID)
    floor = peak.log_max - PROFILE_CUTOFF

    def excess(w: float) -> float:
        # clamped so that brentq never sees -inf
        return max(profile(w) - floor, -1.0)

    def edge(direction: float) -> float:
        inside, step = peak.mode, max(peak.width, 1e-3)
        while True:
            outside = peak.mode + direction * step
            if excess(outside) < 0.0:
                lo, hi = sorted((inside, outside))
                return float(brentq(excess, lo, hi, xtol=1e-10))
            inside, step = outside, 2.0 * step

    return Interval(edge(-1.0), edge(1.0))


def _gamma(
    family: GammaMean,
    prior: Optional[Any],
    stats: SuffStats,
    theta0: Optional[float],
    numerics: NumericsConfig,
) -> LogMarginal:
    """Gamma marginal; ``prior=None`` integrates the point null μ = θ0 over α only.

    The outer integral runs over the log α window of the profile
    log-likelihood; the inner one over v = log μ, where every prior and the
    likelihood are evaluated without forming μ.
    """
    n = stats.n
    if n < 2:
        raise ValidationError("the gamma marginal with the improper shape prior needs n >= 2", field="n", value=n)
    _, alpha_hat = family.mle(stats)
    log_ybar = math.log(stats.ybar)
    log_theta0 = math.log(float(theta0)) if theta0 is not None else log_ybar
    log_chart_prior = None if prior is None else _log_chart_prior_fn(prior, family)
    inner_points = sorted({log_ybar, log_theta0})
    inner_errors = _InnerErrors()

    def base(w: float) -> float:
        return family.log_reference_nu(math.exp(w)) + w

    def profile(w: float) -> float:
        if abs(w) > MAX_LOG_NUISANCE:
            return -math.inf
        v = log_theta0 if prior is None else log_ybar
        return family.loglik_log_mean(v, stats, math.exp(w)) + base(w)

    def log_outer(w: float) -> float:
        if prior is None:
            return profile(w)
        alpha = math.exp(w)

        def log_inner(v: float) -> float:
            prior_value = log_chart_prior(v, alpha)  # type: ignore[misc]
            if prior_value == -math.inf:
                return prior_value
            return family.loglik_log_mean(v, stats, alpha) + prior_value

        inner = integrate_log(
            log_inner,
            Interval.real_line(),
            numerics.rel_tol,
            hint=log_ybar,
            hint_scale=1.0 / math.sqrt(n * alpha),
            grid_size=INNER_GRID,
            limit=numerics.subdivision_limit,
            allow_zero=True,
            points=inner_points,
        )
        inner_errors.record(inner.rel_err)
        return inner.require(numerics.accept_rel_tol, "gamma marginal over log mu") + base(w)

    window = _profile_window(profile, math.log(alpha_hat), math.sqrt(2.0 / n))
    logger.debug(f"gamma marginal: log alpha window [{window.lower:.4g}, {window.upper:.4g}]")
    result = integrate_log(
        log_outer,
        window,
        numerics.rel_tol,
        hint=math.log(alpha_hat),
        hint_scale=math.sqrt(2.0 / n),
        grid_size=OUTER_GRID,
        limit=numerics.subdivision_limit,
    )
    log_value = result.require(numerics.accept_rel_tol, "gamma marginal over log alpha")
    return LogMarginal(log_value, result.rel_err + inner_errors.worst)


def log_marginal_likelihood(
    family: FamilyDescriptor,
    prior: Any,
    stats: SuffStats,
    numerics: Optional[NumericsConfig] = None,
) -> LogMarginal:
    """log m(y) under ``prior``.

    Args:
        family: Sampling family.
        prior: A :class:`PointNull` (the simple model), a DB prior, a
            comparison prior or a :class:`ReferenceModel`.
        stats: Sufficient statistics.
        numerics: Quadrature tolerances.

    Returns:
        LogMarginal; ``log_value`` is ``-inf`` when the sample is impossible
        under a point null.

    Raises:
        QuadratureError: If an integral misses the accepted tolerance.
        UnsupportedOperationError: For the linear model, whose Bayes factor is
            available in closed form only.
    """
    family.validate_stats(stats)
    numerics = _numerics(numerics)
    if isinstance(family, LinearModel):
        raise UnsupportedOperationError(
            "linear-model marginals are not integrated; use bayes_factor", family=family.label
        )

    if isinstance(prior, PointNull):
        if isinstance(family, GammaMean):
            return _gamma(family, None, stats, float(prior.theta0), numerics)  # type: ignore[arg-type]
        return LogMarginal(family.loglik(prior.theta0, stats), 0.0)

    theta0 = getattr(prior, "theta0", None)
    if isinstance(family, GammaMean):
        return _gamma(family, prior, stats, theta0, numerics)  # type: ignore[arg-type]
    if isinstance(family, NormalLocScale) and family.known_sigma is None:
        return _normal(family, prior, stats, numerics)
    if isinstance(family, ShiftedExponential) and family.side == "one_sided" and theta0 is None:
        raise ValidationError("the one-sided marginal needs theta0", field="theta0")
    marginal = _scalar(family, prior, stats, theta0, numerics)
    logger.debug(f"log marginal of {family.label} under {getattr(prior, 'label', prior)}: {marginal.log_value:.10g}")
    return marginal


def marginal_likelihood(
    family: FamilyDescriptor,
    prior: Any,
    stats: SuffStats,
    numerics: Optional[NumericsConfig] = None,
) -> float:
    """m(y); see :func:`log_marginal_likelihood`."""
    return log_marginal_likelihood(family, prior, stats, numerics).value

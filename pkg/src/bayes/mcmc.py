"""
DB Bayes factors as a reference Bayes factor times a posterior expectation.

For orthogonal (θ, ν) and either DB prior,

    B21^D = B21^N × E[c(q★, ν)^-1 h_q★(D̄[θ, θ0 | ν]) | y, π^N],

where B21^N uses the estimation prior π^N(θ|ν) π^N(ν). B21^N comes from
quadrature and the expectation from a random-walk Metropolis chain on the
π^N posterior.
"""

import math
from typing import Callable, Optional, Tuple

import numpy as np

from ..core.config import DBPriorsConfig, get_default_config
from ..core.exceptions import SamplerError, UnsupportedOperationError
from ..core.logger import get_logger
from ..db_prior import DBPrior
from ..models.families import FamilyDescriptor, GammaMean, LinearModel, NormalLocScale, Param
from ..models.stats import SuffStats
from ..numerics.sampler import ChainConfig, batch_means, rw_metropolis
from .marginal import ReferenceModel, log_marginal_likelihood
from .results import BFMethod, BFResult, PointNull

logger = get_logger(__name__)

# (u -> (θ, ν), u -> log posterior density in u, centre, widths)
PosteriorChart = Tuple[
    Callable[[np.ndarray], Tuple[Param, Optional[float]]], Callable[[np.ndarray], float], np.ndarray, np.ndarray
]


def _posterior_chart(family: FamilyDescriptor, stats: SuffStats, theta0: Param) -> PosteriorChart:
    """Coordinates on which the π^N posterior is sampled, with its log density."""
    if isinstance(family, LinearModel):
        raise UnsupportedOperationError("the linear-model Bayes factor is in closed form", family=family.label)

    if isinstance(family, GammaMean):
        _, alpha_hat = family.mle(stats)

        def to_params(u: np.ndarray) -> Tuple[Param, Optional[float]]:
            return math.exp(u[0]), math.exp(u[1])

        def log_target(u: np.ndarray) -> float:
            if np.any(np.abs(u) > 700.0):
                return -math.inf
            alpha = math.exp(u[1])
            # π^N(μ|α) = 1/μ cancels the Jacobian of μ = e^v
            return family.loglik_log_mean(float(u[0]), stats, alpha) + family.log_reference_nu(alpha) + u[1]

        center = np.array([math.log(stats.ybar), math.log(alpha_hat)])
        widths = np.array([1.0 / math.sqrt(stats.n * alpha_hat), math.sqrt(2.0 / stats.n)])
        return to_params, log_target, center, widths

    if isinstance(family, NormalLocScale) and family.known_sigma is None:
        s_hat = math.sqrt(stats.sum_squares / stats.n)

        def to_params(u: np.ndarray) -> Tuple[Param, Optional[float]]:
            return (float(u[0]), math.exp(u[1])), None

        def log_target(u: np.ndarray) -> float:
            if abs(u[1]) > 700.0:
                return -math.inf
            theta, _ = to_params(u)
            # π^N = 1/σ cancels the Jacobian of σ = e^z
            return family.loglik(theta, stats)

        center = np.array([stats.ybar, math.log(s_hat)])
        widths = np.array([s_hat / math.sqrt(stats.n), 1.0 / math.sqrt(2.0 * stats.n)])
        return to_params, log_target, center, widths

    chart = family.chart(stats, theta0)
    hint, width = family.mle_hint(stats)
    if not chart.domain.contains(hint):
        # irregular family: the MLE is the end point T of the chart
        width = min(width, 0.5 * (chart.domain.upper - chart.domain.lower))
        hint = chart.domain.upper - 0.5 * width

    def to_params(u: np.ndarray) -> Tuple[Param, Optional[float]]:
        return chart.to_theta(float(u[0])), None

    def log_target(u: np.ndarray) -> float:
        x = float(u[0])
        if not chart.domain.contains(x):
            return -math.inf
        theta, _ = to_params(u)
        if not (math.isfinite(theta) and family.in_support(theta, theta0)):
            return -math.inf
        return family.loglik(theta, stats) + family.log_reference_theta(theta) + chart.log_jacobian(x)

    return to_params, log_target, np.array([hint]), np.array([width])


def bf_mcmc_correction(
    family: FamilyDescriptor,
    db_prior: DBPrior,
    stats: SuffStats,
    cfg: Optional[ChainConfig] = None,
    *,
    config: Optional[DBPriorsConfig] = None,
) -> BFResult:
    """DB Bayes factor through the posterior-expectation identity.

    Args:
        family: Sampling family.
        db_prior: Sum- or min-DB prior of the alternative.
        stats: Sufficient statistics.
        cfg: Chain configuration; built from ``config.sampler`` when omitted,
            with the proposal scaled to the posterior widths.
        config: Numerical settings.

    Returns:
        BFResult with ``method="mcmc"`` and the batch-means standard error.

    Raises:
        SamplerError: If the effective sample size is below the configured minimum.
        UnsupportedOperationError: For the linear model.
    """
    config = config or get_default_config()
    settings = config.sampler
    theta0 = db_prior.theta0
    to_params, log_target, center, widths = _posterior_chart(family, stats, theta0)
    cfg = cfg or ChainConfig.from_settings(settings).model_copy(
        update={"proposal_scale": settings.proposal_scale * 2.4 / math.sqrt(center.size)}
    )

    def standardized(w: np.ndarray) -> float:
        return log_target(center + widths * w)

    chain = rw_metropolis(standardized, np.zeros(center.size), cfg)

    def log_correction(w: np.ndarray) -> float:
        theta, nu = to_params(center + widths * w)
        value = db_prior.log_density(theta, nu, exact=False)
        if value == -math.inf:
            return value
        return value - family.log_reference_theta(theta, nu)

    factors = np.exp([log_correction(w) for w in chain.draws])
    summary = batch_means(factors, settings.batches)
    if summary.ess < settings.min_ess:
        raise SamplerError(
            f"effective sample size below {settings.min_ess:g}; run a longer chain", ess=summary.ess
        )
    if not summary.mean > 0.0:
        raise SamplerError("the correction factor vanished on every draw", ess=summary.ess)

    reference = ReferenceModel(family, theta0)
    m1 = log_marginal_likelihood(family, PointNull(family, theta0), stats, config.numerics)
    m2 = log_marginal_likelihood(family, reference, stats, config.numerics)
    log_bf21 = m2.log_value - m1.log_value + math.log(summary.mean)
    bf12 = math.exp(-log_bf21)
    rel_mc = summary.std_error / summary.mean
    logger.debug(
        f"MCMC correction for {family.label}: mean {summary.mean:.6g}, se {summary.std_error:.3g}, "
        f"ess {summary.ess:.0f}, acceptance {chain.acceptance_rate:.3f}"
    )
    return BFResult(
        bf12=bf12,
        method=BFMethod.MCMC,
        err=bf12 * (rel_mc + m1.rel_err + m2.rel_err),
        family=family.label,
        prior=db_prior.prior_id,
        stats=stats.summary(),
    )

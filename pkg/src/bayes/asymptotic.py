"""
Large-sample approximation of DB Bayes factors.

The π^N posterior is replaced by N(φ̂, J(φ̂)⁻¹) with the full-sample Fisher
information, and B21^N by its Laplace approximation

    B21^N ≈ f(y|φ̂) / f(y|θ0, ν̂) × π^N(θ̂|ν̂) (2π)^{k/2} det J_θ(φ̂)^{-1/2}.

``form="cauchy"`` writes the Cauchy approximation of the prior as a normal
scale mixture over t ~ IG(1/2, 1/2); ``form="db"`` averages the exact
conditional DB kernel over the normal posterior instead.
"""

import math
from typing import Optional, Tuple

import numpy as np

from ..core.config import DBPriorsConfig, get_default_config
from ..core.exceptions import NumericalError, UnsupportedOperationError, ValidationError
from ..core.logger import get_logger
from ..db_prior import DBPrior, build, q_lower
from ..divergence import DivergenceKind
from ..models.families import (
    Bernoulli,
    ExponentialScale,
    FamilyDescriptor,
    GammaMean,
    NormalLocScale,
    Param,
)
from ..models.stats import SuffStats
from .results import BFMethod, BFResult

logger = get_logger(__name__)

CAUCHY = "cauchy"
DB = "db"

LOG_2PI = math.log(2.0 * math.pi)


def mle(family: FamilyDescriptor, stats: SuffStats) -> Tuple[Param, Optional[float]]:
    """Maximum likelihood (θ̂, ν̂) of the families with a regular likelihood.

    Raises:
        ValidationError: If the MLE lies on the boundary of the parameter space.
        UnsupportedOperationError: For the irregular, mixture and linear families.
    """
    family.validate_stats(stats)
    if isinstance(family, Bernoulli):
        theta = stats.successes / stats.n
        if not 0.0 < theta < 1.0:
            raise ValidationError("the Bernoulli MLE lies on the boundary", field="successes", value=stats.successes)
        return theta, None
    if isinstance(family, ExponentialScale):
        return (math.log(stats.ybar) if family.parameterization == "log" else stats.ybar), None
    if isinstance(family, NormalLocScale):
        if family.known_sigma is not None:
            return stats.ybar, None
        return (stats.ybar, math.sqrt(stats.sum_squares / stats.n)), None
    if isinstance(family, GammaMean):
        return family.mle(stats)
    raise UnsupportedOperationError("no regular MLE and Fisher information for this family", family=family.label)


def _inverse(matrix: np.ndarray, what: str) -> np.ndarray:
    try:
        return np.linalg.inv(matrix)
    except np.linalg.LinAlgError as e:
        raise NumericalError(f"{what} is singular") from e


def _log_normal_batch(diff: np.ndarray, covs: np.ndarray) -> np.ndarray:
    """log N_k(diff | 0, cov) for a stack of covariance matrices."""
    k = diff.size
    sign, logdet = np.linalg.slogdet(covs)
    if np.any(sign <= 0):
        raise NumericalError("mixture covariance is not positive definite")
    solved = np.linalg.solve(covs, np.broadcast_to(diff, (covs.shape[0], k))[..., None])[..., 0]
    quad = solved @ diff
    return -0.5 * (k * LOG_2PI + logdet + quad)


def default_form(family: FamilyDescriptor, kind: DivergenceKind, theta0: Param) -> str:
    """``cauchy`` when q̲ = k/2 (the Cauchy form is then the DB prior's own tail), else ``db``."""
    lower = q_lower(family, kind, theta0, verify=False)
    return CAUCHY if math.isclose(lower, 0.5 * family.theta_dim) else DB


def bf_asymptotic(
    family: FamilyDescriptor,
    theta0: Param,
    stats: SuffStats,
    *,
    kind: str = "sum",
    form: Optional[str] = None,
    prior: Optional[DBPrior] = None,
    draws: Optional[int] = None,
    seed: Optional[int] = None,
    config: Optional[DBPriorsConfig] = None,
) -> BFResult:
    """Asymptotic DB Bayes factor B12 by simple Monte Carlo.

    Args:
        family: Sampling family with a regular likelihood.
        theta0: Null value.
        stats: Sufficient statistics.
        kind: Divergence kind of the DB prior.
        form: ``cauchy`` or ``db``; see :func:`default_form`.
        prior: Prebuilt DB prior for the ``db`` form.
        draws: Monte Carlo draws; ``config.asymptotic.draws`` by default.
        seed: Generator seed; ``config.asymptotic.seed`` by default.
        config: Settings.

    Returns:
        BFResult with ``method="asymptotic"`` and the Monte Carlo standard error.

    Raises:
        NumericalError: If the Fisher information is singular.
        UnsupportedOperationError: For families without a regular MLE.
    """
    config = config or get_default_config()
    kind = DivergenceKind.parse(kind)
    form = form or default_form(family, kind, theta0)
    if form not in (CAUCHY, DB):
        raise ValidationError("form must be 'cauchy' or 'db'", field="form", value=form)
    draws = draws or config.asymptotic.draws
    rng = np.random.default_rng(config.asymptotic.seed if seed is None else seed)

    theta_hat, nu_hat = mle(family, stats)
    n = stats.n
    k = family.theta_dim
    j_theta = n * np.atleast_2d(family.fisher_unit(theta_hat, nu_hat))
    post_cov = _inverse(j_theta, "Fisher information of theta")
    sign, logdet = np.linalg.slogdet(j_theta)
    if sign <= 0:
        raise NumericalError("Fisher information of theta is not positive definite")

    log_lr = family.loglik(theta_hat, stats, nu_hat) - family.loglik(theta0, stats, nu_hat)
    log_prefactor = log_lr + 0.5 * k * LOG_2PI - 0.5 * logdet

    if family.has_nuisance:
        nu_sd = 1.0 / math.sqrt(n * family.fisher_nu(nu_hat))  # type: ignore[attr-defined]
        nus = nu_hat + nu_sd * rng.standard_normal(draws)
    else:
        nus = np.full(draws, np.nan)

    theta_hat_vec = np.atleast_1d(np.asarray(theta_hat, dtype=float))
    theta0_vec = np.atleast_1d(np.asarray(theta0, dtype=float))

    if form == CAUCHY:
        t = 1.0 / rng.chisquare(1.0, draws)
        values = np.zeros(draws)
        valid = np.isnan(nus) | (nus > 0.0)
        nu_list = [None if math.isnan(v) else float(v) for v in nus[valid]]
        if family.has_nuisance:
            scales = np.array(
                [
                    family.n_star(1) * _inverse(np.atleast_2d(family.fisher_unit(theta0, v)), "Fisher information")
                    for v in nu_list
                ]
            )
            log_ratio = np.array(
                [family.log_reference_theta(theta_hat, nu_hat) - family.log_reference_theta(theta0, v) for v in nu_list]
            )
        else:
            scale = family.n_star(1) * _inverse(np.atleast_2d(family.fisher_unit(theta0)), "Fisher information")
            scales = np.broadcast_to(scale, (len(nu_list), k, k))
            log_gap = family.log_reference_theta(theta_hat) - family.log_reference_theta(theta0)
            log_ratio = np.full(len(nu_list), log_gap)
        covs = t[valid, None, None] * scales + post_cov
        values[valid] = np.exp(log_ratio + _log_normal_batch(theta_hat_vec - theta0_vec, covs))
    else:
        prior = prior or build(family, kind, theta0, config=config)
        log_base = family.log_reference_theta(theta_hat, nu_hat)
        thetas = rng.multivariate_normal(theta_hat_vec, post_cov, size=draws)
        values = np.empty(draws)
        for i, (row, nu) in enumerate(zip(thetas, nus)):
            nu_i = None if math.isnan(nu) else float(nu)
            theta_i = float(row[0]) if k == 1 else tuple(float(x) for x in row)
            if nu_i is not None and not nu_i > 0.0:
                values[i] = 0.0
                continue
            log_density = prior.log_density(theta_i, nu_i, exact=False)
            if log_density == -math.inf:
                values[i] = 0.0
                continue
            values[i] = math.exp(log_density - family.log_reference_theta(theta_i, nu_i) + log_base)

    mean = float(values.mean())
    if not mean > 0.0:
        raise NumericalError("Monte Carlo average vanished", point=form)
    std_error = float(values.std(ddof=1) / math.sqrt(draws))
    log_bf21 = log_prefactor + math.log(mean)
    bf12 = math.exp(-log_bf21)
    logger.debug(f"asymptotic B12 ({form} form, {draws} draws) for {family.label}: {bf12:.6g}")
    return BFResult(
        bf12=bf12,
        method=BFMethod.ASYMPTOTIC,
        err=bf12 * std_error / mean,
        family=family.label,
        prior=f"{kind.value}-db",
        stats=stats.summary(),
    )

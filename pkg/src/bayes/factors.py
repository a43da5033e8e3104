"""
Bayes factors B12 = m1(y) / m2(y) by quadrature.

The simple model M1 fixes θ = θ0 and keeps π^N(ν) on the nuisance parameter;
M2 uses a DB or comparison prior π(θ|ν) with the same π^N(ν), so the
arbitrary constant of the improper π^N(ν) cancels.
"""

import math
from typing import Any, Optional, Tuple, Union

import numpy as np
from scipy import special

from ..alt_priors.comparison import ComparisonPrior, ComparisonPriorId, comparison_prior
from ..core.config import DBPriorsConfig, NumericsConfig, get_default_config
from ..core.exceptions import NumericalError, ValidationError
from ..core.logger import get_logger
from ..db_prior import DEFAULT_DELTA, DBPrior, build
from ..divergence import DivergenceKind
from ..models.families import FamilyDescriptor, LinearModel, Param, ShiftedExponential
from ..models.stats import LinearModelStats, SuffStats
from ..numerics.quadrature import Interval, integrate_log
from .marginal import ReferenceModel, log_marginal_likelihood
from .results import BFMethod, BFResult, PointNull

logger = get_logger(__name__)

Prior = Union[DBPrior, ComparisonPrior, ReferenceModel]

_DB_IDS = {
    "sum-db": DivergenceKind.SUM,
    "min-db": DivergenceKind.MIN,
    "sum": DivergenceKind.SUM,
    "min": DivergenceKind.MIN,
}


def prior_label(prior: Any) -> str:
    """Identifier of a prior as written in results."""
    if isinstance(prior, DBPrior):
        return prior.prior_id
    if isinstance(prior, ComparisonPrior):
        return prior.prior_id.value
    return str(getattr(prior, "label", type(prior).__name__))


def resolve_prior(
    family: FamilyDescriptor,
    prior_id: Union[str, ComparisonPriorId],
    theta0: Param,
    *,
    config: Optional[DBPriorsConfig] = None,
    delta: float = DEFAULT_DELTA,
) -> Prior:
    """Build the M2 prior named by ``prior_id``.

    Accepts ``sum-db``/``min-db``, ``reference`` and every comparison-prior
    spelling (``arithmetic``, ``fractional``, ``jeffreys-rule``, ``bp-cauchy``,
    ``mixture-cauchy``, ``jzs``).

    Raises:
        PriorNotAvailableError: If the prior does not exist for the family.
        ValidationError: If the id is unknown.
    """
    key = str(getattr(prior_id, "value", prior_id)).strip().lower().replace("_", "-")
    if key in _DB_IDS:
        return build(family, _DB_IDS[key], theta0, delta=delta, config=config)
    if key == "reference":
        return ReferenceModel(family, theta0)
    return comparison_prior(prior_id, family, theta0)


def _r_squared(family: LinearModel, stats: LinearModelStats) -> float:
    y = np.asarray(stats.y, dtype=float)
    if family.X1.shape[1] == 0:
        rss_common = float(y @ y)
    else:
        beta1, *_ = np.linalg.lstsq(family.X1, y, rcond=None)
        resid = y - family.X1 @ beta1
        rss_common = float(resid @ resid)
    full = np.hstack([family.X1, family.Xe])
    beta, *_ = np.linalg.lstsq(full, y, rcond=None)
    resid = y - full @ beta
    rss_full = float(resid @ resid)
    if not rss_common > 0.0 or not rss_full > 0.0:
        raise ValidationError("the response is fitted exactly; R^2 is degenerate", field="y")
    return 1.0 - rss_full / rss_common


def jzs_bayes_factor(
    family: LinearModel,
    stats: LinearModelStats,
    prior: str = "jzs",
    numerics: Optional[NumericsConfig] = None,
) -> BFResult:
    """Bayes factor of βe = 0 under the JZS prior, as a one-dimensional integral over g.

    B21 = ∫ (1+g)^{(n-p1-ke)/2} (1+g(1-R²))^{-(n-p1)/2} IG(g | 1/2, n/2) dg.

    Raises:
        ValidationError: If n ≤ p1 + ke or the fit is exact.
        QuadratureError: If the g-integral misses the accepted tolerance.
    """
    numerics = numerics or NumericsConfig()
    family.validate_stats(stats)
    n, p1, ke = stats.n, family.X1.shape[1], family.geometry.k_e
    if not n > p1 + ke:
        raise ValidationError("the JZS Bayes factor needs n > p1 + k_e", field="n", value=n)
    log_unexplained = math.log1p(-_r_squared(family, stats))
    a, b = 0.5 * (n - p1 - ke), 0.5 * (n - p1)
    log_ig_const = 0.5 * math.log(0.5 * n) - float(special.gammaln(0.5))

    def log_f(w: float) -> float:
        # w = log g
        if w < -700.0:
            return -math.inf
        return (
            a * float(np.logaddexp(0.0, w))
            - b * float(np.logaddexp(0.0, w + log_unexplained))
            + log_ig_const
            - 1.5 * w
            - 0.5 * n * math.exp(-w)
            + w
        )

    result = integrate_log(log_f, Interval.real_line(), numerics.rel_tol, hint=math.log(n), hint_scale=2.0)
    log_bf21 = result.require(numerics.accept_rel_tol, "JZS integral over g")
    bf12 = math.exp(-log_bf21)
    return BFResult(
        bf12=bf12,
        method=BFMethod.QUADRATURE,
        err=bf12 * result.rel_err,
        family=family.label,
        prior=prior,
        stats={"n": n, "p1": p1, "k_e": ke, "r_squared": 1.0 - math.exp(log_unexplained)},
    )


def log_bayes_factor(
    family: FamilyDescriptor,
    prior2: Prior,
    stats: SuffStats,
    prior1: Optional[PointNull] = None,
    *,
    config: Optional[DBPriorsConfig] = None,
) -> Tuple[float, float]:
    """(log B12, relative error bound); ``-inf`` when the sample is impossible under M1.

    Works on the log scale, so it also serves Bayes factors that would
    underflow as floats. See :func:`bayes_factor`.
    """
    config = config or get_default_config()
    family.validate_stats(stats)
    theta0 = prior2.theta0

    if isinstance(family, LinearModel):
        result = jzs_bayes_factor(
            family, stats, prior=prior_label(prior2), numerics=config.numerics  # type: ignore[arg-type]
        )
        return result.log_bf12, result.err / result.bf12

    if isinstance(family, ShiftedExponential):
        t0 = float(theta0)
        if family.side == "one_sided" and not stats.tmin > t0:
            raise ValidationError("the one-sided test needs T > theta0", field="tmin", value=stats.tmin)
        if stats.tmin < t0:
            # f(y | θ0) vanishes: no observation can lie below θ0 under M1
            return -math.inf, 0.0

    prior1 = prior1 or PointNull(family, theta0)
    m1 = log_marginal_likelihood(family, prior1, stats, config.numerics)
    m2 = log_marginal_likelihood(family, prior2, stats, config.numerics)
    log_bf = m1.log_value - m2.log_value
    if math.isnan(log_bf):
        raise NumericalError("log Bayes factor is NaN", point=(m1.log_value, m2.log_value))
    return log_bf, m1.rel_err + m2.rel_err


def bayes_factor(
    family: FamilyDescriptor,
    prior2: Prior,
    stats: SuffStats,
    prior1: Optional[PointNull] = None,
    *,
    config: Optional[DBPriorsConfig] = None,
) -> BFResult:
    """B12 of θ = θ0 against the alternative carrying ``prior2``.

    Args:
        family: Sampling family.
        prior2: Prior of the alternative; its ``theta0`` is the null value.
        stats: Sufficient statistics.
        prior1: The simple model; defaults to the point null at ``prior2.theta0``.
        config: Numerical settings.

    Returns:
        BFResult with a propagated relative error bound. The linear model
        uses the JZS closed form; a two-sided irregular test with T < θ0
        gives an exact zero.

    Raises:
        ValidationError: For a one-sided irregular test with T ≤ θ0.
        QuadratureError: If a marginal does not converge.
        NumericalError: If B12 overflows or underflows.
    """
    config = config or get_default_config()
    label = prior_label(prior2)
    if isinstance(family, LinearModel):
        return jzs_bayes_factor(family, stats, prior=label, numerics=config.numerics)  # type: ignore[arg-type]

    log_bf, rel_err = log_bayes_factor(family, prior2, stats, prior1, config=config)
    if log_bf == -math.inf:
        return BFResult(
            bf12=0.0, method=BFMethod.CLOSED_FORM, err=0.0, family=family.label, prior=label, stats=stats.summary()
        )
    if not -745.0 < log_bf < 709.0:
        raise NumericalError("Bayes factor is not representable as a float; use log_bayes_factor", point=log_bf)
    bf12 = math.exp(log_bf)
    logger.debug(f"B12 for {family.label} with {label}: {bf12:.10g}")
    return BFResult(
        bf12=bf12,
        method=BFMethod.QUADRATURE,
        err=bf12 * rel_err,
        family=family.label,
        prior=label,
        stats=stats.summary(),
    )

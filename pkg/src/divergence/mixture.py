"""Sum divergence of the two-component normal mixture."""

import math

import numpy as np

from ..core.exceptions import ValidationError
from ..numerics.quadrature import DEFAULT_ACCEPT_REL_TOL, Interval, integrate

# Half-width of the y-range around the centre of the normal kernel.
G_HALF_WIDTH = 10.0


def _log1p_ratio_exp(log_ratio: float, x: float) -> float:
    """log(1 + exp(log_ratio + x)) without overflow."""
    return float(np.logaddexp(0.0, log_ratio + x))


def mixture_g(p: float, mu: float, center: float) -> float:
    """E log[1 + ((1 - p)/p) exp(y μ - μ²/2)] for y ~ N(center, 1).

    Raises:
        QuadratureError: If the integral does not reach the accepted tolerance.
    """
    log_ratio = math.log1p(-p) - math.log(p)
    shift = -0.5 * mu * mu

    def integrand(y: float) -> float:
        z = y - center
        return _log1p_ratio_exp(log_ratio, y * mu + shift) * math.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)

    domain = Interval(center - G_HALF_WIDTH, center + G_HALF_WIDTH)
    result = integrate(integrand, domain, rel_tol=1e-10, abs_tol=1e-14, points=[center])
    return result.require(DEFAULT_ACCEPT_REL_TOL, f"mixture G-function at mu={mu}")


def mixture_divergence(p: float, mu: float, mode: str = "laplace") -> float:
    """Unitary sum divergence D̄^S(μ, 0) of p N(0,1) + (1-p) N(μ,1).

    Args:
        p: Weight of the null component, in (0, 1).
        mu: Alternative location.
        mode: ``exact`` integrates the G-function; ``laplace`` uses its closed
            form approximation.

    Returns:
        Nonnegative divergence; zero at μ = 0.
    """
    if not 0.0 < p < 1.0:
        raise ValidationError("mixture weight p must lie in (0, 1)", field="p", value=p)
    if mode not in ("exact", "laplace"):
        raise ValidationError("mode must be 'exact' or 'laplace'", field="mode", value=mode)
    mu = float(mu)
    if mu == 0.0:
        return 0.0
    if not math.isfinite(mu):
        return math.inf
    if mode == "laplace":
        log_ratio = math.log1p(-p) - math.log(p)
        half = 0.5 * mu * mu
        value = _log1p_ratio_exp(log_ratio, half) - _log1p_ratio_exp(log_ratio, -half)
    else:
        value = mixture_g(p, mu, mu) - mixture_g(p, mu, 0.0)
    return max(value, 0.0)

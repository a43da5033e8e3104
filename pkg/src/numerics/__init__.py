"""
Numerical foundation: quadrature, integrability probing, special functions
and the seeded Metropolis sampler.
"""

from .quadrature import (
    DEFAULT_ACCEPT_REL_TOL,
    DEFAULT_REL_TOL,
    EmptyIntegrandError,
    Integrability,
    Interval,
    LogIntegral,
    Peak,
    QuadratureResult,
    integrate,
    integrate_log,
    locate_peak,
    probe_integrability,
)
from .sampler import BatchMeans, Chain, ChainConfig, batch_means, rw_metropolis
from .special import digamma, trigamma

__all__ = [
    "DEFAULT_REL_TOL",
    "DEFAULT_ACCEPT_REL_TOL",
    "Interval",
    "EmptyIntegrandError",
    "QuadratureResult",
    "LogIntegral",
    "Peak",
    "Integrability",
    "integrate",
    "integrate_log",
    "locate_peak",
    "probe_integrability",
    "trigamma",
    "digamma",
    "ChainConfig",
    "Chain",
    "BatchMeans",
    "rw_metropolis",
    "batch_means",
]

"""
Sampling families, sufficient statistics and linear-model geometry.
"""

from .families import (
    Bernoulli,
    Chart,
    ExponentialScale,
    FamilyDescriptor,
    FamilyId,
    GammaMean,
    LinearModel,
    NormalLocScale,
    NormalMixture,
    ReferencePrior,
    ShiftedExponential,
    gamma_mle_to_suffstats,
    get_family,
    register_family,
    registered_families,
    resolve_family_id,
)
from .linear import LinearGeometry, linear_model_geometry
from .stats import (
    BernoulliStats,
    ExponentialStats,
    GammaStats,
    LinearModelStats,
    MixtureStats,
    NormalStats,
    ShiftedExponentialStats,
    SuffStats,
    parse_stats,
    stats_json_schema,
)


def loglik(family: FamilyDescriptor, theta, stats: SuffStats, nu=None) -> float:
    return family.loglik(theta, stats, nu)


def kl_unit(family: FamilyDescriptor, a, b, nu=None) -> float:
    return family.kl_unit(a, b, nu)


__all__ = [
    # Families
    "FamilyId",
    "FamilyDescriptor",
    "Chart",
    "ReferencePrior",
    "Bernoulli",
    "ExponentialScale",
    "NormalLocScale",
    "ShiftedExponential",
    "NormalMixture",
    "GammaMean",
    "LinearModel",
    "register_family",
    "registered_families",
    "resolve_family_id",
    "get_family",
    "loglik",
    "kl_unit",
    "gamma_mle_to_suffstats",
    # Statistics
    "SuffStats",
    "BernoulliStats",
    "ExponentialStats",
    "NormalStats",
    "ShiftedExponentialStats",
    "GammaStats",
    "MixtureStats",
    "LinearModelStats",
    "parse_stats",
    "stats_json_schema",
    # Linear model
    "LinearGeometry",
    "linear_model_geometry",
]

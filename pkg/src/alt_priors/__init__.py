"""
Comparison priors: arithmetic and fractional intrinsic priors, Jeffreys'
general rule and the Cauchy proposals.
"""

from .comparison import (
    ComparisonPrior,
    ComparisonPriorId,
    bp_cauchy_density,
    comparison_prior,
    mixture_cauchy_density,
    total_mass,
)
from .intrinsic import ARITHMETIC, FRACTIONAL, intrinsic_density, log_one_sided_arithmetic, normal_mu_conditional
from .jeffreys import jeffreys_rule_density

__all__ = [
    "ComparisonPrior",
    "ComparisonPriorId",
    "comparison_prior",
    "total_mass",
    "intrinsic_density",
    "jeffreys_rule_density",
    "bp_cauchy_density",
    "mixture_cauchy_density",
    "log_one_sided_arithmetic",
    "normal_mu_conditional",
    "ARITHMETIC",
    "FRACTIONAL",
]

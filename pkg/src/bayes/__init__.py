"""
Bayes factors, their Monte Carlo and asymptotic variants, and evidence diagnostics.
"""

from .asymptotic import bf_asymptotic, default_form, mle
from .conventions import ConventionVerdict, resolve_s_convention
from .factors import (
    bayes_factor,
    jzs_bayes_factor,
    log_bayes_factor,
    prior_label,
    resolve_prior,
)
from .limits import (
    ConsistencyScan,
    LimitCurve,
    LimitKind,
    ScanDirection,
    consistency_scan,
    evidence_limit,
    evidence_limit_curve,
    normal_mixing_log_density,
)
from .marginal import LogMarginal, ReferenceModel, log_marginal_likelihood, marginal_likelihood
from .mcmc import bf_mcmc_correction
from .results import BFMethod, BFResult, PointNull

__all__ = [
    "BFMethod",
    "BFResult",
    "PointNull",
    "ReferenceModel",
    "LogMarginal",
    "log_marginal_likelihood",
    "marginal_likelihood",
    "bayes_factor",
    "log_bayes_factor",
    "jzs_bayes_factor",
    "prior_label",
    "resolve_prior",
    "bf_mcmc_correction",
    "bf_asymptotic",
    "default_form",
    "mle",
    "LimitKind",
    "LimitCurve",
    "evidence_limit",
    "evidence_limit_curve",
    "normal_mixing_log_density",
    "ScanDirection",
    "ConsistencyScan",
    "consistency_scan",
    "ConventionVerdict",
    "resolve_s_convention",
]

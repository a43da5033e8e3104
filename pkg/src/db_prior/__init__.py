"""
DB prior construction: tail indices, normalizers, densities and approximations.
"""

from .approx import ApproxDBPrior, approx_db_prior, jzs_linear_model, local_student_approximation
from .kernels import DEFAULT_DELTA, exp_kernel, log_poly_kernel
from .normalizers import (
    ConditionalNormalizer,
    db_normalizer,
    gamma_sum_normalizer,
    log_db_normalizer,
    normal_sum_conditional_mu,
    normal_sum_kappa,
    normal_sum_marginal_sigma,
)
from .prior import DBPrior, build, density
from .tail_index import clear_tail_index_cache, q_lower

__all__ = [
    "DEFAULT_DELTA",
    "log_poly_kernel",
    "exp_kernel",
    "DBPrior",
    "build",
    "density",
    "q_lower",
    "clear_tail_index_cache",
    "ConditionalNormalizer",
    "db_normalizer",
    "gamma_sum_normalizer",
    "log_db_normalizer",
    "normal_sum_kappa",
    "normal_sum_marginal_sigma",
    "normal_sum_conditional_mu",
    "ApproxDBPrior",
    "approx_db_prior",
    "local_student_approximation",
    "jzs_linear_model",
]

"""Kernels h_q(t) applied to the unitary divergence, in log form."""

import math

DEFAULT_DELTA = 0.5


def log_poly_kernel(t: float, q: float) -> float:
    """log (1 + t)^-q, the kernel of every DB prior."""
    if math.isinf(t):
        return -math.inf
    return -q * math.log1p(t)


def exp_kernel(t: float, q: float) -> float:
    """exp(-q t); yields unit-information normal priors instead of DB priors."""
    return math.exp(-q * t)

"""
Symmetrized and unitary divergences between a parameter and the null value.
"""

from .measures import DivergenceKind, UnitaryDivergence, d_min, d_sum, unitary
from .mixture import mixture_divergence, mixture_g

__all__ = [
    "DivergenceKind",
    "UnitaryDivergence",
    "d_sum",
    "d_min",
    "unitary",
    "mixture_divergence",
    "mixture_g",
]

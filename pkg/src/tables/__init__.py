"""
Reproduction targets: published tables, evidence-limit curves, prior curves
and the seeded simulation studies.
"""

# importing the target modules registers them
from . import curves, limit_figures, reference_tables  # noqa: F401
from .curves import DEFAULT_POINTS, default_grid, prior_curve
from .registry import TargetName, TargetOptions, reproduce, target_names
from .simulations import mixture_sample, simulate_table7, simulate_table8

__all__ = [
    "TargetName",
    "TargetOptions",
    "reproduce",
    "target_names",
    "prior_curve",
    "default_grid",
    "DEFAULT_POINTS",
    "simulate_table7",
    "simulate_table8",
    "mixture_sample",
]

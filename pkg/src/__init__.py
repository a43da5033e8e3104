"""
db-priors - divergence-based objective priors for Bayesian hypothesis testing.

Builds sum and minimum divergence-based priors from symmetrized Kullback-Leibler
divergences, the classical comparison priors, and the resulting Bayes factors
by quadrature, Monte Carlo correction and asymptotic approximation.
"""

__version__ = "0.1.0"

"""
Tests for intrinsic priors, Jeffreys' rule and the Cauchy proposals.
"""

import math
import unittest

from scipy import integrate as sp_integrate
from scipy import stats as sp_stats

from src.alt_priors import (
    ARITHMETIC,
    FRACTIONAL,
    ComparisonPriorId,
    bp_cauchy_density,
    comparison_prior,
    intrinsic_density,
    jeffreys_rule_density,
    log_one_sided_arithmetic,
    mixture_cauchy_density,
    normal_mu_conditional,
    total_mass,
)
from src.core.exceptions import PriorNotAvailableError, UnsupportedOperationError, ValidationError
from src.db_prior import build, density
from src.models import get_family


class TestComparisonPriorId(unittest.TestCase):
    """Test cases for prior id parsing"""

    def test_short_forms(self):
        """Test CLI spellings and short forms"""
        self.assertIs(ComparisonPriorId.parse("jeffreys-rule"), ComparisonPriorId.JEFFREYS_RULE)
        self.assertIs(ComparisonPriorId.parse("ap"), ComparisonPriorId.MIXTURE_CAUCHY)
        self.assertEqual(ComparisonPriorId.parse("fractional").label, "F")

    def test_unknown(self):
        """Test that unknown priors are rejected"""
        with self.assertRaises(ValidationError):
            ComparisonPriorId.parse("uniform")


class TestIntrinsic(unittest.TestCase):
    """Test cases for closed-form intrinsic priors"""

    def test_bernoulli_arithmetic_proper(self):
        """Test that the Bernoulli arithmetic prior integrates to one"""
        prior = comparison_prior("arithmetic", get_family("bernoulli"), 0.75)
        self.assertTrue(prior.is_proper)
        self.assertAlmostEqual(total_mass(prior), 1.0, delta=1e-6)

    def test_bernoulli_fractional_mass(self):
        """Test the total mass of the improper fractional prior"""
        family = get_family("bernoulli")
        half = comparison_prior("fractional", family, 0.5)
        three_quarters = comparison_prior("fractional", family, 0.75)
        self.assertFalse(half.is_proper)
        self.assertAlmostEqual(half.total_mass, 1.28, delta=0.01)
        self.assertAlmostEqual(three_quarters.total_mass, 1.18, delta=0.01)

    def test_exponential_closed_forms(self):
        """Test mu0/(mu0+mu)^2 and exp(-mu/mu0)/mu0"""
        family = get_family("exponential")
        self.assertAlmostEqual(intrinsic_density(ARITHMETIC, family, 5.0, 3.0), 5.0 / 64.0, places=12)
        self.assertAlmostEqual(intrinsic_density(FRACTIONAL, family, 5.0, 3.0), math.exp(-0.6) / 5.0, places=12)

    def test_exponential_log_parameterization(self):
        """Test that the log chart carries the Jacobian"""
        family = get_family("exponential", parameterization="log")
        value = intrinsic_density(ARITHMETIC, family, math.log(5.0), math.log(3.0))
        self.assertAlmostEqual(value, 3.0 * 5.0 / 64.0, places=12)

    def test_normal_arithmetic_at_null(self):
        """Test the normal arithmetic prior at (mu0, sigma0)"""
        family = get_family("normal")
        sigma0 = 2.0
        expected = (1.0 / (math.pi * sigma0)) * sp_stats.norm(0.0, sigma0).pdf(0.0)
        self.assertAlmostEqual(intrinsic_density(ARITHMETIC, family, (0.0, sigma0), (0.0, sigma0)), expected, places=12)

    def test_one_sided_arithmetic(self):
        """Test the series branch and the total mass of the one-sided prior"""
        u = 8.0
        x = math.exp(-u)
        self.assertAlmostEqual(log_one_sided_arithmetic(u), math.log(-math.log1p(-x) / x - 1.0), places=8)
        self.assertEqual(log_one_sided_arithmetic(-1.0), -math.inf)
        f = lambda t: math.exp(log_one_sided_arithmetic(t))  # noqa: E731
        mass = sp_integrate.quad(f, 0.0, 1.0, limit=200)[0] + sp_integrate.quad(f, 1.0, math.inf, limit=200)[0]
        self.assertAlmostEqual(mass, 1.0, delta=1e-6)

    def test_unavailable(self):
        """Test families without closed forms"""
        with self.assertRaises(PriorNotAvailableError):
            comparison_prior("arithmetic", get_family("mixture"), 0.0)
        with self.assertRaises(PriorNotAvailableError):
            comparison_prior("fractional", get_family("irregular", side="one-sided"), 0.0)
        with self.assertRaises(PriorNotAvailableError):
            comparison_prior("arithmetic", get_family("irregular"), 0.0)
        with self.assertRaises(ValidationError):
            intrinsic_density("geometric", get_family("bernoulli"), 0.5, 0.5)

    def test_normal_conditional_split(self):
        """Test that pi(sigma) N(mu | mean, var) rebuilds the joint normal priors"""
        family = get_family("normal")
        theta0, theta = (0.5, 1.0), (0.7, 2.0)
        for kind in (ARITHMETIC, FRACTIONAL):
            with self.subTest(kind=kind):
                log_sigma, mean, var = normal_mu_conditional(kind, theta0, theta[1])
                joint = math.exp(log_sigma) * sp_stats.norm(mean, math.sqrt(var)).pdf(theta[0])
                self.assertAlmostEqual(joint, intrinsic_density(kind, family, theta0, theta), places=12)
                self.assertEqual(mean, 0.5)
                mass, _ = sp_integrate.quad(
                    lambda s: math.exp(normal_mu_conditional(kind, theta0, s)[0]), 0.0, math.inf
                )
                self.assertAlmostEqual(mass, 1.0, delta=1e-8)
        with self.assertRaises(ValidationError):
            normal_mu_conditional("geometric", theta0, 1.0)

    def test_normal_priors_carry_conditional(self):
        """Test that only the normal intrinsic priors expose the mu-given-sigma split"""
        normal = comparison_prior("fractional", get_family("normal"), (0.0, 1.0))
        self.assertEqual(normal.mu_given_sigma(2.0)[2], 0.5)
        self.assertIsNone(comparison_prior("arithmetic", get_family("exponential"), 5.0).mu_given_sigma)


class TestJeffreysRule(unittest.TestCase):
    """Test cases for Jeffreys' general rule"""

    def test_normal_mean_is_cauchy(self):
        """Test that the rule gives Cauchy(mu0, sigma) for a normal mean"""
        family = get_family("normal", known_sigma=1.5)
        for mu in (-2.0, 0.4, 3.0):
            self.assertAlmostEqual(
                jeffreys_rule_density(family, 0.0, mu), sp_stats.cauchy(0.0, 1.5).pdf(mu), places=6
            )

    def test_unsupported(self):
        """Test the irregular and location-scale families"""
        with self.assertRaises(UnsupportedOperationError):
            jeffreys_rule_density(get_family("irregular"), 0.0, 1.0)
        with self.assertRaises(UnsupportedOperationError):
            comparison_prior("jeffreys-rule", get_family("gamma"), 10.0)


class TestCauchyProposals(unittest.TestCase):
    """Test cases for the mixture Cauchy priors"""

    def test_bp_cauchy(self):
        """Test the standard Cauchy density"""
        self.assertAlmostEqual(bp_cauchy_density(0.0), 1.0 / math.pi, places=14)

    def test_equal_weights_match_db_prior(self):
        """Test that the sum-DB prior equals the ap prior when p = 1/2"""
        family = get_family("mixture", p=0.5, divergence_mode="laplace")
        prior = build(family, "sum", 0.0)
        ap = comparison_prior("ap", family, 0.0)
        for mu in (-2.0, 0.0, 0.8, 3.0):
            self.assertAlmostEqual(density(prior, mu), mixture_cauchy_density(mu, 0.5), places=8)
            self.assertAlmostEqual(ap.density(mu), mixture_cauchy_density(mu, 0.5), places=14)

    def test_mixture_only(self):
        """Test that the Cauchy proposals need the mixture family"""
        with self.assertRaises(PriorNotAvailableError):
            comparison_prior("bp", get_family("bernoulli"), 0.5)
        with self.assertRaises(PriorNotAvailableError):
            comparison_prior("jzs", get_family("bernoulli"), 0.5)


if __name__ == "__main__":
    unittest.main()

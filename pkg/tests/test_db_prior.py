"""
Tests for DB prior construction, normalizers and approximations.
"""

import math
import unittest

import numpy as np
from scipy import integrate as sp_integrate
from scipy import stats as sp_stats

from src.alt_priors import ARITHMETIC, comparison_prior, intrinsic_density, total_mass
from src.core.exceptions import PriorNotAvailableError, UnsupportedOperationError, ValidationError
from src.db_prior import (
    DEFAULT_DELTA,
    ApproxDBPrior,
    ConditionalNormalizer,
    approx_db_prior,
    build,
    clear_tail_index_cache,
    density,
    exp_kernel,
    gamma_sum_normalizer,
    jzs_linear_model,
    local_student_approximation,
    log_db_normalizer,
    log_poly_kernel,
    normal_sum_conditional_mu,
    normal_sum_marginal_sigma,
    q_lower,
)
from src.divergence import DivergenceKind, unitary
from src.models import get_family


def min_db_normalizer(alpha: float) -> float:
    """2 int_0^inf (1 + 2 alpha (t - 1 + e^-t))^-3/2 dt by scipy quadrature."""

    def f(t):
        return (1.0 + 2.0 * alpha * (t + math.expm1(-t))) ** -1.5

    head, _ = sp_integrate.quad(f, 0.0, 1.0, epsabs=0.0, epsrel=1e-12)
    tail, _ = sp_integrate.quad(f, 1.0, np.inf, epsabs=0.0, epsrel=1e-12, limit=200)
    return 2.0 * (head + tail)


class TestKernels(unittest.TestCase):
    """Test cases for kernels"""

    def test_poly_kernel(self):
        """Test the polynomial kernel and its infinite limit"""
        self.assertAlmostEqual(log_poly_kernel(3.0, 0.5), -0.5 * math.log(4.0), places=14)
        self.assertEqual(log_poly_kernel(math.inf, 0.5), -math.inf)

    def test_unit_information_cross_check(self):
        """Test that the exponential kernel on D^S gives the unit-information normal prior"""
        family = get_family("normal", known_sigma=1.0)
        divergence = unitary(family, "sum", 0.0)
        for mu in (-1.5, 0.0, 0.7, 2.0):
            value = exp_kernel(divergence(mu), 0.5) / math.sqrt(2.0 * math.pi)
            self.assertAlmostEqual(value, sp_stats.norm.pdf(mu), places=12)


class TestTailIndex(unittest.TestCase):
    """Test cases for q_lower"""

    def setUp(self):
        clear_tail_index_cache()

    def test_tabulated_values(self):
        """Test verified tail indices of scalar families"""
        self.assertEqual(q_lower(get_family("bernoulli"), "sum", 0.5), 0.0)
        self.assertEqual(q_lower(get_family("exponential"), "min", 5.0), 1.0)
        self.assertEqual(q_lower(get_family("irregular"), "min", 0.0), 1.0)
        self.assertEqual(q_lower(get_family("normal", known_sigma=1.0), "sum", 0.0), 0.5)

    def test_normal_location_scale(self):
        """Test the joint tail index of (mu, sigma)"""
        self.assertEqual(q_lower(get_family("normal"), "sum", (0.0, 1.0)), 0.5)

    def test_missing(self):
        """Test that a nonexistent prior has no tail index"""
        with self.assertRaises(PriorNotAvailableError):
            q_lower(get_family("normal"), "min", (0.0, 1.0))


class TestClosedForms(unittest.TestCase):
    """Test cases for DB priors with closed-form densities"""

    def test_irregular_two_sided(self):
        """Test the min-DB prior (1 + 2|theta|)^-3/2 / 2"""
        prior = build(get_family("irregular"), "min", 0.0)
        self.assertEqual(prior.q_star, 1.0 + DEFAULT_DELTA)
        self.assertAlmostEqual(density(prior, 0.0), 0.5, places=12)
        self.assertAlmostEqual(density(prior, -1.0), 0.5 * 3.0**-1.5, places=12)
        self.assertAlmostEqual(density(prior, 1.0), density(prior, -1.0), places=14)

    def test_irregular_one_sided(self):
        """Test that the one-sided prior doubles and vanishes below theta0"""
        prior = build(get_family("irregular", side="one-sided"), "min", 0.0)
        self.assertAlmostEqual(density(prior, 0.0), 1.0, places=12)
        self.assertEqual(density(prior, -0.5), 0.0)

    def test_normal_known_sigma_is_cauchy(self):
        """Test that the sum-DB prior of a normal mean is Cauchy(mu0, sigma)"""
        prior = build(get_family("normal", known_sigma=2.0), "sum", 1.0)
        self.assertEqual(prior.q_star, 1.0)
        self.assertAlmostEqual(prior.normalizer, 2.0 * math.pi, places=10)
        for mu in (-3.0, 1.0, 4.5):
            self.assertAlmostEqual(density(prior, mu), sp_stats.cauchy(1.0, 2.0).pdf(mu), places=12)

    def test_normal_location_scale_factorizes(self):
        """Test the joint sum-DB density against its marginal and conditional"""
        prior = build(get_family("normal"), "sum", (0.0, 1.0))
        for mu, sigma in ((0.0, 1.0), (1.5, 0.5), (-2.0, 3.0)):
            expected = normal_sum_marginal_sigma(sigma, 1.0) * normal_sum_conditional_mu(mu, sigma, 0.0, 1.0)
            self.assertAlmostEqual(density(prior, (mu, sigma)) / expected, 1.0, delta=1e-5)

    def test_sigma_marginal_is_proper(self):
        """Test that the marginal density of sigma integrates to one"""
        mass, _ = sp_integrate.quad(lambda s: normal_sum_marginal_sigma(s, 2.0), 0.0, np.inf, limit=200)
        self.assertAlmostEqual(mass, 1.0, places=6)

    def test_conditional_cauchy_scale(self):
        """Test the squared Cauchy scale (sigma0^4 + sigma^4) / (sigma0^2 + sigma^2)"""
        scale = math.sqrt((1.0 + 16.0) / (1.0 + 4.0))
        self.assertAlmostEqual(normal_sum_conditional_mu(0.0, 2.0, 0.0, 1.0), 1.0 / (math.pi * scale), places=12)


class TestNumericalPriors(unittest.TestCase):
    """Test cases for priors normalized by quadrature"""

    def test_bernoulli_sum(self):
        """Test that the Bernoulli sum-DB prior is proper and symmetric at 1/2"""
        prior = build(get_family("bernoulli"), "sum", 0.5)
        self.assertEqual(prior.q_lower, 0.0)
        self.assertEqual(prior.q_star, 0.5)
        self.assertAlmostEqual(density(prior, 0.2), density(prior, 0.8), places=10)
        self.assertAlmostEqual(total_mass(prior), 1.0, delta=1e-6)

    def test_exponential_min(self):
        """Test that the exponential min-DB prior is proper"""
        prior = build(get_family("exponential"), "min", 5.0)
        self.assertAlmostEqual(total_mass(prior), 1.0, delta=1e-6)

    def test_gamma_conditional(self):
        """Test that the gamma prior is proper given the shape"""
        prior = build(get_family("gamma"), "sum", 10.0)
        self.assertIsInstance(prior.normalizer, ConditionalNormalizer)
        self.assertAlmostEqual(total_mass(prior, nu=4.0), 1.0, delta=1e-5)
        with self.assertRaises(ValidationError):
            density(prior, 11.0)

    def test_gamma_elliptic_normalizer(self):
        """Test the quadrature normalizer against 4K(1 - 4 alpha)"""
        family = get_family("gamma")
        for alpha in (0.1, 1.0, 4.0):
            with self.subTest(alpha=alpha):
                value = math.exp(log_db_normalizer(family, DivergenceKind.SUM, 10.0, 0.5, alpha))
                self.assertAlmostEqual(value / gamma_sum_normalizer(alpha), 1.0, delta=1e-7)
        exponential = math.exp(log_db_normalizer(get_family("exponential"), DivergenceKind.SUM, 5.0, 0.5))
        self.assertAlmostEqual(exponential / gamma_sum_normalizer(1.0), 1.0, delta=1e-7)
        with self.assertRaises(ValidationError):
            gamma_sum_normalizer(0.0)

    def test_exponential_min_normalizer(self):
        """Test c = 2 int_0^inf (1 + 2(t - 1 + e^-t))^-3/2 dt in both parameterizations"""
        mean = build(get_family("exponential"), "min", 5.0)
        log = build(get_family("exponential", parameterization="log"), "min", math.log(5.0))
        self.assertAlmostEqual(mean.normalizer / min_db_normalizer(1.0), 1.0, delta=1e-7)
        self.assertAlmostEqual(mean.normalizer, 3.17006, delta=1e-4)
        self.assertAlmostEqual(log.normalizer / mean.normalizer, 1.0, delta=1e-8)

    def test_gamma_min_normalizer(self):
        """Test the gamma min-DB normalizer against its one-dimensional integral"""
        family = get_family("gamma")
        for alpha in (0.5, 4.0, 250.0):
            with self.subTest(alpha=alpha):
                value = math.exp(log_db_normalizer(family, DivergenceKind.MIN, 10.0, 1.5, alpha))
                self.assertAlmostEqual(value / min_db_normalizer(alpha), 1.0, delta=1e-6)

    def test_log_chart_density(self):
        """Test the chart density of log-scale priors against theta-space densities"""
        prior = build(get_family("exponential"), "min", 5.0)
        for mu in (0.2, 5.0, 80.0):
            with self.subTest(mu=mu):
                self.assertAlmostEqual(
                    prior.log_chart_density(math.log(mu)), prior.log_density(mu) + math.log(mu), places=10
                )
        # polynomial tail, far beyond exp overflow
        self.assertTrue(math.isfinite(prior.log_chart_density(5000.0)))
        self.assertAlmostEqual(
            prior.log_chart_density(5000.0 + math.log(5.0)),
            -1.5 * math.log1p(2.0 * 4999.0) - math.log(prior.normalizer),
            places=8,
        )


class TestNormalization(unittest.TestCase):
    """Test cases for the total mass of every buildable prior"""

    CASES = (
        ("bernoulli", {}, "sum", 0.5, None),
        ("bernoulli", {}, "min", 0.5, None),
        ("bernoulli", {}, "sum", 0.3, None),
        ("bernoulli", {}, "min", 0.3, None),
        ("exponential", {}, "sum", 5.0, None),
        ("exponential", {}, "min", 5.0, None),
        ("exponential", {"parameterization": "log"}, "sum", math.log(5.0), None),
        ("exponential", {"parameterization": "log"}, "min", math.log(5.0), None),
        ("irregular", {}, "min", 0.0, None),
        ("irregular", {"side": "one-sided"}, "min", 0.0, None),
        ("normal", {"known_sigma": 2.0}, "sum", 1.0, None),
        ("normal", {"known_sigma": 2.0}, "min", 1.0, None),
        ("gamma", {}, "sum", 10.0, 0.5),
        ("gamma", {}, "sum", 10.0, 50.0),
        ("gamma", {}, "min", 10.0, 0.5),
        ("gamma", {}, "min", 10.0, 50.0),
        ("mixture", {"p": 0.5, "divergence_mode": "laplace"}, "sum", 0.0, None),
    )

    def test_scalar_priors(self):
        """Test that scalar DB priors integrate to one"""
        for name, params, kind, theta0, nu in self.CASES:
            family = get_family(name, **params)
            with self.subTest(family=family.label, kind=kind, theta0=theta0, nu=nu):
                self.assertAlmostEqual(total_mass(build(family, kind, theta0), nu=nu), 1.0, delta=1e-6)

    def test_normal_location_scale(self):
        """Test that the joint (mu, sigma) prior integrates to one"""
        prior = build(get_family("normal"), "sum", (0.0, 1.0))
        self.assertAlmostEqual(total_mass(prior), 1.0, delta=1e-6)


class TestNormalizerOrdering(unittest.TestCase):
    """Test cases for c(q) as a function of q"""

    def test_decreasing_in_q(self):
        """Test that c(q) decreases as the kernel sharpens"""
        cases = (
            (get_family("bernoulli"), DivergenceKind.SUM, 0.5, (0.5, 1.0, 2.0, 4.0)),
            (get_family("exponential"), DivergenceKind.SUM, 5.0, (0.5, 1.0, 2.0, 4.0)),
            (get_family("exponential"), DivergenceKind.MIN, 5.0, (1.5, 2.0, 3.0)),
            (get_family("irregular"), DivergenceKind.MIN, 0.0, (1.5, 2.0, 3.0)),
        )
        for family, kind, theta0, qs in cases:
            with self.subTest(family=family.label, kind=kind.value):
                values = [log_db_normalizer(family, kind, theta0, q) for q in qs]
                self.assertTrue(np.all(np.diff(values) < 0.0), values)

    def test_gamma_decreasing_in_q(self):
        """Test the ordering given the gamma shape"""
        family = get_family("gamma")
        values = [log_db_normalizer(family, DivergenceKind.MIN, 10.0, q, 3.0) for q in (1.5, 2.0, 3.0)]
        self.assertTrue(np.all(np.diff(values) < 0.0), values)


class TestExponentialTails(unittest.TestCase):
    """Test cases for the tails of the exponential priors"""

    def setUp(self):
        self.family = get_family("exponential")

    def test_tail_ordering(self):
        """Test pi^M > pi^S > pi^A > pi^F far from mu0"""
        mu = 1e8
        minimum = density(build(self.family, "min", 5.0), mu)
        summed = density(build(self.family, "sum", 5.0), mu)
        arithmetic = comparison_prior("arithmetic", self.family, 5.0).density(mu)
        fractional = comparison_prior("fractional", self.family, 5.0).density(mu)
        self.assertGreater(minimum, summed)
        self.assertGreater(summed, arithmetic)
        self.assertGreater(arithmetic, fractional)

    def test_arithmetic_has_no_mean(self):
        """Test that every decade adds about mu0 log 10 to the partial mean"""
        for k in (3, 5, 7):
            with self.subTest(decade=k):
                chunk, _ = sp_integrate.quad(
                    lambda mu: mu * intrinsic_density(ARITHMETIC, self.family, 5.0, mu), 10.0**k, 10.0 ** (k + 1)
                )
                self.assertAlmostEqual(chunk / (5.0 * math.log(10.0)), 1.0, delta=0.01)


class TestBuildErrors(unittest.TestCase):
    """Test cases for invalid prior requests"""

    def test_missing_kind(self):
        """Test that the normal min-DB prior does not exist"""
        with self.assertRaises(PriorNotAvailableError):
            build(get_family("normal"), "min", (0.0, 1.0))

    def test_delta(self):
        """Test that delta must be positive"""
        with self.assertRaises(ValidationError):
            build(get_family("bernoulli"), "sum", 0.5, delta=0.0)


class TestConditionalNormalizer(unittest.TestCase):
    """Test cases for the cached conditional normalizer"""

    def setUp(self):
        self.calls = []

        def exact(alpha):
            self.calls.append(alpha)
            return math.log(alpha)

        self.normalizer = ConditionalNormalizer(exact, grid=41, bounds=(0.1, 10.0))

    def test_exact_cache(self):
        """Test that exact values are computed once"""
        self.assertAlmostEqual(self.normalizer.exact(2.0), math.log(2.0))
        self.normalizer.exact(2.0)
        self.assertEqual(self.calls, [2.0])

    def test_interpolation(self):
        """Test interpolation inside the bounds and exact values outside"""
        self.assertAlmostEqual(self.normalizer.log_value(2.5), math.log(2.5), places=10)
        self.assertAlmostEqual(self.normalizer(50.0), 50.0, places=8)
        self.assertTrue(math.isnan(self.normalizer.log_value(-1.0)))


class TestApproximations(unittest.TestCase):
    """Test cases for Cauchy and Student approximations"""

    def test_known_sigma_matches_exact(self):
        """Test that the Cauchy approximation is exact for a normal mean"""
        family = get_family("normal", known_sigma=2.0)
        approx = approx_db_prior(family, 1.0)
        exact = build(family, "sum", 1.0)
        for mu in (-2.0, 1.0, 3.5):
            self.assertAlmostEqual(approx.density(mu), density(exact, mu), places=10)

    def test_local_student_degrees(self):
        """Test d = 2 q_lower - k + 1"""
        approx = local_student_approximation(get_family("normal", known_sigma=1.0), "sum", 0.0)
        self.assertEqual(approx.degrees, 1.0)
        exponential = get_family("exponential", parameterization="log")
        with self.assertRaises(UnsupportedOperationError):
            local_student_approximation(exponential, "sum", 0.0)

    def test_mixture_cauchy(self):
        """Test the mixture approximation Ca(0, 1/(1-p))"""
        approx = approx_db_prior(get_family("mixture", p=0.75), 0.0)
        self.assertAlmostEqual(approx.density(1.0), sp_stats.cauchy(0.0, 2.0).pdf(1.0), places=12)

    def test_requires_flat_reference(self):
        """Test that a theta-dependent reference prior is refused"""
        with self.assertRaises(UnsupportedOperationError):
            approx_db_prior(get_family("bernoulli"), 0.5)
        with self.assertRaises(UnsupportedOperationError):
            approx_db_prior(get_family("irregular"), 0.0)

    def test_scale_matrix_checks(self):
        """Test validation of the Student scale matrix"""
        with self.assertRaises(ValidationError):
            ApproxDBPrior(theta0=[0.0, 0.0], scale_matrix=[[1.0]])
        with self.assertRaises(ValidationError):
            ApproxDBPrior(theta0=[0.0], scale_matrix=[[1.0]], degrees=0.0)

    def test_jzs(self):
        """Test the JZS scale n sigma^2 (V'V)^-1"""
        X1 = np.ones((6, 1))
        Xe = np.arange(6.0).reshape(-1, 1)
        prior = jzs_linear_model(X1, Xe, sigma=2.0, n=6)
        centered = Xe[:, 0] - Xe[:, 0].mean()
        self.assertAlmostEqual(float(prior.scale_matrix[0, 0]), 6.0 * 4.0 / float(centered @ centered), places=10)
        with self.assertRaises(ValidationError):
            jzs_linear_model(X1, Xe, sigma=2.0, n=5)


if __name__ == "__main__":
    unittest.main()

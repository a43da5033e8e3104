"""
Tests for quadrature, the integrability probe, special functions and the sampler.
"""

import math
import unittest

import numpy as np

from src.core.exceptions import NumericalError, QuadratureError, SamplerError, ValidationError
from src.numerics import (
    ChainConfig,
    EmptyIntegrandError,
    Integrability,
    Interval,
    batch_means,
    digamma,
    integrate,
    integrate_log,
    locate_peak,
    probe_integrability,
    rw_metropolis,
    trigamma,
)


class TestInterval(unittest.TestCase):
    """Test cases for integration domains"""

    def test_requires_order(self):
        """Test that empty or reversed intervals are rejected"""
        with self.assertRaises(ValidationError):
            Interval(1.0, 1.0)
        with self.assertRaises(ValidationError):
            Interval(2.0, 1.0)

    def test_open_membership(self):
        """Test that the end points are excluded"""
        domain = Interval.positive()
        self.assertFalse(domain.contains(0.0))
        self.assertTrue(domain.contains(1e-300))
        self.assertFalse(domain.bounded)


class TestIntegrate(unittest.TestCase):
    """Test cases for adaptive quadrature"""

    def test_gaussian_real_line(self):
        """Test the Gaussian integral over the real line"""
        result = integrate(lambda x: math.exp(-0.5 * x * x), Interval.real_line())
        self.assertTrue(result.converged)
        self.assertAlmostEqual(result.value, math.sqrt(2.0 * math.pi), places=8)

    def test_half_line(self):
        """Test an exponential tail on the positive half-line"""
        result = integrate(lambda x: math.exp(-3.0 * x), Interval.positive())
        self.assertAlmostEqual(result.value, 1.0 / 3.0, places=9)

    def test_cauchy_tails(self):
        """Test that polynomial tails are integrated to full mass"""
        result = integrate(lambda x: 1.0 / (math.pi * (1.0 + x * x)), Interval.real_line())
        self.assertAlmostEqual(result.value, 1.0, places=7)

    def test_nan_integrand(self):
        """Test that NaN from the integrand raises NumericalError"""
        with self.assertRaises(NumericalError):
            integrate(lambda x: math.nan, Interval(0.0, 1.0))

    def test_require(self):
        """Test that an inaccurate result refuses to be used"""
        result = integrate(lambda x: 1.0, Interval(0.0, 2.0))
        self.assertAlmostEqual(result.require(1e-6, "constant"), 2.0)
        with self.assertRaises(QuadratureError):
            type(result)(value=1.0, abs_err=0.5, converged=False).require(1e-6, "bad")


class TestIntegrateLog(unittest.TestCase):
    """Test cases for log-scale integration"""

    def test_far_away_peak(self):
        """Test an integrand whose values underflow as floats"""
        log_f = lambda x: -2000.0 - 0.5 * ((x - 40.0) / 0.5) ** 2  # noqa: E731
        out = integrate_log(log_f, Interval.real_line(), hint=0.0, hint_scale=10.0)
        expected = -2000.0 + math.log(0.5 * math.sqrt(2.0 * math.pi))
        self.assertAlmostEqual(out.log_value, expected, places=6)
        self.assertAlmostEqual(out.peak.mode, 40.0, places=4)

    def test_empty_integrand(self):
        """Test an integrand that vanishes on the whole grid"""
        with self.assertRaises(EmptyIntegrandError):
            integrate_log(lambda x: -math.inf, Interval(0.0, 1.0))
        out = integrate_log(lambda x: -math.inf, Interval(0.0, 1.0), allow_zero=True)
        self.assertEqual(out.log_value, -math.inf)
        self.assertEqual(out.require(1e-6, "zero"), -math.inf)

    def test_break_points(self):
        """Test a narrow secondary bump passed as a break point"""

        def log_f(x):
            return float(np.logaddexp(-0.5 * x * x, math.log(0.5) - 0.5 * ((x - 6.0) / 0.2) ** 2))

        out = integrate_log(log_f, Interval.real_line(), 1e-10, hint=0.0, points=[6.0, math.inf])
        expected = math.log(math.sqrt(2.0 * math.pi) * (1.0 + 0.5 * 0.2))
        self.assertAlmostEqual(out.log_value, expected, places=8)
        self.assertAlmostEqual(out.peak.mode, 0.0, places=5)

    def test_locate_peak(self):
        """Test the mode and curvature width of a Gaussian"""
        peak = locate_peak(lambda x: -0.5 * ((x - 3.0) / 2.0) ** 2, Interval.real_line())
        self.assertAlmostEqual(peak.mode, 3.0, places=5)
        self.assertAlmostEqual(peak.width, 2.0, delta=0.05)


class TestProbe(unittest.TestCase):
    """Test cases for the integrability probe"""

    def test_convergent_tails(self):
        """Test that 1/(1+x^2) is integrable over the real line"""
        verdict = probe_integrability(lambda x: 1.0 / (1.0 + x * x), Interval.real_line())
        self.assertIs(verdict, Integrability.CONVERGENT)

    def test_divergent_tails(self):
        """Test that 1/(1+|x|) is not integrable"""
        verdict = probe_integrability(lambda x: 1.0 / (1.0 + abs(x)), Interval.real_line())
        self.assertIs(verdict, Integrability.DIVERGENT)

    def test_divergent_at_finite_end(self):
        """Test that 1/x diverges at zero"""
        verdict = probe_integrability(lambda x: 1.0 / x, Interval(0.0, 1.0))
        self.assertIs(verdict, Integrability.DIVERGENT)

    def test_few_decades(self):
        """Test that too short a probe is refused"""
        with self.assertRaises(ValidationError):
            probe_integrability(lambda x: 1.0, Interval(0.0, 1.0), decades=3)


class TestSpecial(unittest.TestCase):
    """Test cases for the polygamma wrappers"""

    def test_known_values(self):
        """Test trigamma(1) = pi^2/6 and digamma(1) = -gamma"""
        self.assertAlmostEqual(trigamma(1.0), math.pi**2 / 6.0, places=12)
        self.assertAlmostEqual(digamma(1.0), -0.5772156649015329, places=12)

    def test_array_shape(self):
        """Test that arrays keep their shape"""
        values = trigamma(np.array([1.0, 2.0, 3.0]))
        self.assertEqual(values.shape, (3,))

    def test_domain(self):
        """Test that nonpositive arguments are rejected"""
        with self.assertRaises(ValidationError):
            digamma(0.0)
        with self.assertRaises(ValidationError):
            trigamma(np.array([1.0, -1.0]))


class TestSampler(unittest.TestCase):
    """Test cases for the Metropolis sampler"""

    def setUp(self):
        self.cfg = ChainConfig(steps=6000, burn_in=1000, proposal_scale=1.0, seed=5)

    def test_deterministic(self):
        """Test that equal seeds give identical chains"""
        target = lambda x: -0.5 * float(x @ x)  # noqa: E731
        first = rw_metropolis(target, [0.0, 0.0], self.cfg)
        second = rw_metropolis(target, [0.0, 0.0], self.cfg)
        np.testing.assert_array_equal(first.draws, second.draws)
        self.assertEqual(first.draws.shape, (5000, 2))

    def test_standard_normal_moments(self):
        """Test the mean of a standard normal target"""
        chain = rw_metropolis(lambda x: -0.5 * float(x @ x), 0.0, self.cfg)
        summary = batch_means(chain.draws[:, 0], batches=50)
        self.assertLess(abs(summary.mean), 5.0 * summary.std_error + 0.05)
        self.assertGreater(chain.acceptance_rate, 0.1)

    def test_infinite_start(self):
        """Test that the start must have a finite target"""
        with self.assertRaises(ValidationError):
            rw_metropolis(lambda x: -math.inf, 0.0, self.cfg)

    def test_burn_in_check(self):
        """Test that the burn-in must be shorter than the chain"""
        with self.assertRaises(ValueError):
            ChainConfig(steps=10, burn_in=10, proposal_scale=1.0, seed=0)

    def test_batch_means_short(self):
        """Test that too short a series is a SamplerError"""
        with self.assertRaises(SamplerError):
            batch_means(np.zeros(10), batches=50)

    def test_batch_means_iid(self):
        """Test the batch-means error of an iid series"""
        values = np.random.default_rng(1).standard_normal(50_000)
        summary = batch_means(values, batches=50)
        self.assertAlmostEqual(summary.std_error, 1.0 / math.sqrt(50_000), delta=0.002)


if __name__ == "__main__":
    unittest.main()

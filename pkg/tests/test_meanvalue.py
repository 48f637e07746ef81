# Standard library
import math
import unittest

# Packages
import numpy as np
from numpy.polynomial import Polynomial
from scipy.signal import argrelextrema

# Local
from canonicalwebteam.curveasym import (
    FunctionPair,
    MeanValueProblem,
    Verdict,
    estimate_C,
    estimate_C_weight,
    eta_integral,
    integral_mean_function,
    make_sequence,
    meanvalue_trace,
    mu_point,
    quantile_ratio_trace,
    xi_cauchy,
    xi_lagrange,
)
from canonicalwebteam.curveasym.asymptote import INVERSE_E
from canonicalwebteam.curveasym.catalog import (
    build,
    cauchy_sine,
    power_weight,
    remark_pair,
)
from canonicalwebteam.curveasym.exceptions import (
    CapabilityError,
    InputError,
)


def identity(t):
    return np.asarray(t, dtype=float)


def sine_pair(scale=1.0, shift=0.0, stretch=1.0, offset=0.0):
    """
    g = scale sin(6t) + shift, h = stretch t + offset from 0, which has
    four Cauchy points in (0, 2]
    """

    return FunctionPair(
        lambda t: scale * np.sin(6.0 * identity(t)) + shift,
        lambda t: stretch * identity(t) + offset,
        0.0,
        dg=lambda t: 6.0 * scale * np.cos(6.0 * identity(t)),
        dh=lambda t: stretch * np.ones_like(identity(t)),
    )


def psi(pair, x, taus):
    """
    (g(x) - g(a)) h(t) - (h(x) - h(a)) g(t)
    """

    delta_g = pair.g(x) - pair.g_a
    delta_h = pair.h(x) - pair.h_a

    return delta_g * pair.h(taus) - delta_h * pair.g(taus)


class TestCauchyPoints(unittest.TestCase):
    def test_lagrange_parabola(self):
        """
        Check the mean value point of t^2 is the midpoint
        """

        for x in (1.0, 0.01):
            result = xi_lagrange(
                lambda t: np.square(t), lambda t: 2.0 * identity(t), 0.0, x
            )

            self.assertAlmostEqual(result.tau, x / 2, delta=1e-9 * x)
            self.assertAlmostEqual(result.ratio_t, 0.5, delta=1e-10)
            self.assertEqual(result.kind, "xi")

    def test_power_pair(self):
        """
        Check g = t^4, h = t puts xi at x / 4^(1/3) at every scale
        """

        pair = remark_pair(3.0).pair

        for x in (1.0, 0.5, 0.25, 0.1):
            with self.subTest(x=x):
                result = xi_cauchy(pair, x)

                self.assertAlmostEqual(
                    result.ratio_h, 4.0 ** (-1.0 / 3.0), delta=1e-9
                )
                self.assertLess(result.residual, 1e-6)

    def test_mu_matches_xi(self):
        """
        Check the extremum of Psi and the Cauchy point agree for a
        smooth pair
        """

        for alpha, x in ((1.0, 1.0), (3.0, 0.5)):
            with self.subTest(alpha=alpha):
                pair = remark_pair(alpha).pair
                mu = mu_point(pair, x)
                xi = xi_cauchy(pair, x)

                self.assertEqual(mu.kind, "mu")
                self.assertAlmostEqual(mu.tau, xi.tau, delta=1e-9)

        self.assertAlmostEqual(
            mu_point(remark_pair(1.0).pair, 1.0).ratio_h, 0.5, delta=1e-9
        )

    def test_sine(self):
        """
        Check xi/x tends to 1/sqrt(3) for g = sin t, h = t
        """

        result = xi_cauchy(cauchy_sine().pair, 0.01)

        self.assertAlmostEqual(result.ratio_t, 1 / math.sqrt(3), delta=1e-5)

    def test_sine_at_two(self):
        """
        Check xi(2) for g = sin t, h = t solves 2 cos(tau) = sin 2
        """

        result = xi_cauchy(cauchy_sine().pair, 2.0)

        self.assertAlmostEqual(
            result.tau, math.acos(math.sin(2.0) / 2.0), delta=1e-9
        )

    def test_largest_point(self):
        """
        Check nothing past xi solves the Cauchy equation, and nothing
        past mu is an extremum of Psi, on a 10^4 point grid
        """

        pair = sine_pair()
        x = 2.0
        expected = (4 * math.pi - math.acos(math.sin(12.0) / 12.0)) / 6.0

        xi = xi_cauchy(pair, x)
        mu = mu_point(pair, x)

        self.assertAlmostEqual(xi.tau, expected, delta=1e-9)
        self.assertAlmostEqual(mu.tau, expected, delta=1e-9)

        delta_g = pair.g(x) - pair.g_a
        delta_h = pair.h(x) - pair.h_a
        taus = np.linspace(xi.tau + 1e-6, x, 10**4)
        residuals = pair.dg(taus) * delta_h - pair.dh(taus) * delta_g

        self.assertTrue(np.all(residuals > 0) or np.all(residuals < 0))

        taus = np.linspace(mu.tau + 1e-6, x, 10**4)
        steps = np.diff(psi(pair, x, taus))

        self.assertTrue(np.all(steps > 0) or np.all(steps < 0))

    def test_affine_invariance(self):
        """
        Check mu and xi don't move under g -> 3g + 1, h -> 2h - 5
        """

        pair = sine_pair()
        moved = sine_pair(scale=3.0, shift=1.0, stretch=2.0, offset=-5.0)

        for x in (2.0, 1.0, 0.3):
            with self.subTest(x=x):
                xi = xi_cauchy(pair, x).tau
                mu = mu_point(pair, x).tau

                self.assertAlmostEqual(xi_cauchy(moved, x).tau, xi, delta=1e-9)
                self.assertAlmostEqual(mu_point(moved, x).tau, mu, delta=1e-9)

    def test_xi_above_mu(self):
        """
        Check a tangency of g' with the secant slope counts as a
        Cauchy point but not as an extremum of Psi.

        g' = 1 + (t - 3/4)^2 (t - 3/14) keeps g(1) - g(0) = 1, so the
        Cauchy equation is (t - 3/4)^2 (t - 3/14) = 0 on [0, 1].
        """

        g = Polynomial.fromroots([0.75, 0.75, 3.0 / 14.0]).integ()
        g = g + Polynomial([0.0, 1.0])
        pair = FunctionPair(g, identity, 0.0, dg=g.deriv(), dh=np.ones_like)

        xi = xi_cauchy(pair, 1.0)
        mu = mu_point(pair, 1.0)

        self.assertAlmostEqual(xi.tau, 0.75, delta=1e-12)
        self.assertAlmostEqual(mu.tau, 3.0 / 14.0, delta=1e-9)
        self.assertGreater(xi.tau, mu.tau)

    def test_mu_against_brute_force(self):
        """
        Check mu on a cubic without derivatives against the largest
        local extremum of Psi on a 10^5 point grid
        """

        def cubic(t):
            t = identity(t)
            return t**3 - 1.5 * t**2 + 0.6 * t

        pair = FunctionPair(cubic, identity, 0.0)
        taus = np.linspace(0.0, 1.0, 10**5 + 1)
        values = psi(pair, 1.0, taus)
        extrema = np.concatenate(
            [
                argrelextrema(values, np.greater)[0],
                argrelextrema(values, np.less)[0],
            ]
        )
        largest = taus[np.max(extrema)]

        result = mu_point(pair, 1.0)

        self.assertAlmostEqual(result.tau, largest, delta=2e-5)
        self.assertAlmostEqual(
            result.tau, (3.0 + math.sqrt(3.0)) / 6.0, delta=1e-6
        )

    def test_needs_derivatives(self):
        pair = FunctionPair(lambda t: np.square(t), identity, 0.0)

        with self.assertRaises(CapabilityError):
            xi_cauchy(pair, 1.0)

    def test_h_must_increase(self):
        pair = FunctionPair(
            identity,
            lambda t: -identity(t),
            0.0,
            dg=lambda t: np.ones_like(identity(t)),
            dh=lambda t: -np.ones_like(identity(t)),
        )

        with self.assertRaises(InputError):
            xi_cauchy(pair, 1.0)

    def test_x_outside_domain(self):
        problem, _, _ = build("lagrange-extremal")

        with self.assertRaises(InputError):
            xi_cauchy(problem.pair, 2.0)


class TestIntegralMean(unittest.TestCase):
    def test_power_weight(self):
        """
        Check eta/x = (beta + 1)/(beta + 2) for f = t, w = t^beta
        """

        for beta in (0.0, 1.0, 2.0):
            problem = power_weight(beta)

            for x in (1.0, 0.5):
                with self.subTest(beta=beta, x=x):
                    result = problem.solve(x)

                    self.assertEqual(result.kind, "eta")
                    self.assertAlmostEqual(
                        result.ratio_t, (beta + 1) / (beta + 2), delta=1e-9
                    )

    def test_cauchy_route(self):
        """
        Check the integral mean found through the pair of integrals
        agrees with the direct solve
        """

        pair = integral_mean_function(identity, identity, 0.0)
        through_pair = xi_cauchy(pair, 1.0, n_grid=256)
        direct = eta_integral(identity, identity, 1.0, n_grid=256)

        self.assertAlmostEqual(direct.tau, 2.0 / 3.0, delta=1e-9)
        self.assertAlmostEqual(through_pair.tau, direct.tau, delta=1e-8)

    def test_no_mass(self):
        with self.assertRaises(InputError):
            eta_integral(identity, lambda t: 0.0 * identity(t), 1.0)

        with self.assertRaises(InputError):
            eta_integral(identity, identity, -1.0)


class TestConstant(unittest.TestCase):
    def test_weight(self):
        """
        Check C = 1/(beta + 1) for the weight t^beta
        """

        seq = [0.5**k for k in range(10)]

        for beta in (0.0, 1.0, 2.0):
            with self.subTest(beta=beta):
                estimate = estimate_C_weight(
                    lambda t: np.power(t, beta), 0.0, seq
                )

                self.assertAlmostEqual(
                    estimate.value, 1 / (beta + 1), delta=1e-9
                )
                self.assertEqual(estimate.samples_used, 8)
                self.assertEqual(len(estimate.sup_grid), 10)

    def test_vanishing_slope(self):
        """
        Check samples where h' vanishes are skipped with a warning
        """

        estimate = estimate_C(
            lambda t: t + math.sin(t),
            lambda t: 1.0 + math.cos(t),
            0.0,
            [math.pi, 2.0, 1.0],
        )

        self.assertEqual(len(estimate.warnings), 1)
        self.assertEqual(len(estimate.sup_grid), 2)

        with self.assertRaises(InputError):
            estimate_C(
                lambda t: t + math.sin(t),
                lambda t: 1.0 + math.cos(t),
                0.0,
                [math.pi],
            )

    def test_quantile_ratio(self):
        """
        Check (h(qx) - h(0))/(h(x) - h(0)) against q^(1/C)
        """

        seq = [0.5**k for k in range(8)]

        def square(t):
            return t * t

        exact = quantile_ratio_trace(square, 0.0, seq, 0.5, 0.5)

        self.assertEqual(exact.verdict, Verdict.HOLDS)
        self.assertAlmostEqual(exact.estimate.value, 0.25)
        self.assertEqual(exact.direction, "upper")

        loose = quantile_ratio_trace(square, 0.0, seq, 0.5, 1.0)

        self.assertEqual(loose.verdict, Verdict.HOLDS)

        tight = quantile_ratio_trace(square, 0.0, seq, 0.5, 0.25)

        self.assertEqual(tight.verdict, Verdict.VIOLATED)

        with self.assertRaises(InputError):
            quantile_ratio_trace(square, 0.0, seq, 1.0, 0.5)

        with self.assertRaises(InputError):
            quantile_ratio_trace(square, 0.0, seq, 0.5, 0.0)


class TestMeanValueTrace(unittest.TestCase):
    def test_remark_pair(self):
        problem, spec, _ = build("remark41", 1.0)
        trace = meanvalue_trace(problem, make_sequence(spec))

        self.assertEqual(len(trace.results), 24)
        self.assertEqual(trace.failures, [])

        for ratio in trace.column("ratio_h"):
            self.assertAlmostEqual(ratio, 0.5, delta=1e-9)

        self.assertEqual(
            [check.statistic for check in trace.checks],
            ["ratio_h", "ratio_t"],
        )
        self.assertTrue(
            all(check.verdict == Verdict.HOLDS for check in trace.checks)
        )

    def test_equality_case(self):
        """
        Check the extremal Lagrange example stays above 1/e and
        creeps down towards it
        """

        problem, spec, _ = build("lagrange-extremal")
        xs = make_sequence(spec)
        trace = meanvalue_trace(problem, xs)
        ratios = trace.column("ratio_t")

        self.assertEqual(len(ratios), 7)

        for ratio in ratios:
            self.assertGreaterEqual(ratio, INVERSE_E - 1e-6)

        for before, after in zip(ratios, ratios[1:]):
            self.assertLess(after, before)

        self.assertLess(ratios[-1] - INVERSE_E, 2 / abs(math.log(xs[-1])))
        self.assertEqual(trace.checks[0].verdict, Verdict.HOLDS)

        # (g - g(a))/(h - h(a)) ~ 1/|ln x| converges, slowly
        self.assertEqual(problem.pair.warnings, [])

    def test_diverging_quotient(self):
        """
        Check a quotient (g - g(a))/(h - h(a)) that blows up at a is
        reported
        """

        pair = FunctionPair(np.sqrt, identity, 0.0)
        pair.check(1.0)

        self.assertEqual(len(pair.warnings), 1)
        self.assertIn("diverges", pair.warnings[0])

    def test_failures(self):
        """
        Check points that can't be solved are listed and skipped
        """

        problem, _, _ = build("lagrange-extremal")
        trace = meanvalue_trace(problem, [2.0, 0.5, 0.25, 0.125, 0.0625])

        self.assertEqual(len(trace.failures), 1)
        self.assertEqual(len(trace.results), 4)
        self.assertTrue(trace.checks)

    def test_too_few_points(self):
        problem, _, _ = build("remark41")
        trace = meanvalue_trace(problem, [1.0, 0.5])

        self.assertEqual(len(trace.results), 2)
        self.assertEqual(trace.checks, [])

    def test_problem_validation(self):
        with self.assertRaises(InputError):
            MeanValueProblem("nu", pair=remark_pair(1.0).pair)

        with self.assertRaises(InputError):
            MeanValueProblem("eta", f=identity)

        with self.assertRaises(InputError):
            MeanValueProblem("xi")


if __name__ == "__main__":
    unittest.main()

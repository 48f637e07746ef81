# Standard library
import math
import unittest

# Packages
import numpy as np
from scipy.integrate import quad

# Local
from canonicalwebteam.curveasym import (
    ArcLength,
    Curve,
    Verdict,
    arc_ratio_trace,
    eq6_check,
    explore_conjecture,
    make_sequence,
)
from canonicalwebteam.curveasym.asymptote import INVERSE_E
from canonicalwebteam.curveasym.catalog import log_spiral, to_minus_inf
from canonicalwebteam.curveasym.exceptions import NumericalError
from canonicalwebteam.curveasym.parsers import parse


def parabola():
    return Curve.graph(
        lambda t: np.square(t),
        (0.0, math.inf),
        df=lambda t: 2.0 * np.asarray(t),
    )


def parabola_length(lower, upper):
    length, _ = quad(lambda t: math.sqrt(1 + 4 * t * t), lower, upper)
    return length


class TestArcLength(unittest.TestCase):
    def test_from_the_start(self):
        """
        Check L(t) and L(tau) are measured from the start of the curve
        """

        lengths = ArcLength(parabola(), 1.0, 0.0)

        self.assertAlmostEqual(
            lengths.total, parabola_length(0.0, 1.0), delta=1e-8
        )
        self.assertAlmostEqual(
            lengths(0.5), parabola_length(0.0, 0.5), delta=1e-8
        )
        self.assertEqual(lengths(1.0), lengths.total)

    def test_spiral_from_minus_infinity(self):
        """
        Check the spiral e^t has length sqrt(2) e^t behind t
        """

        t = -3.0
        lengths = ArcLength(log_spiral(1.0), t, t - 8 * math.pi)

        self.assertAlmostEqual(
            lengths.total / math.exp(t), math.sqrt(2), delta=1e-8
        )


class TestArcRatioTrace(unittest.TestCase):
    def test_parabola(self):
        """
        Check the arc ratios of the parabola stay above 1/e and end
        near 1/2
        """

        seq = [0.5**k for k in range(6)]
        trace = arc_ratio_trace(parabola(), seq)

        self.assertEqual(trace.failures, [])

        for key in ("ratio_ls", "ratio_lt"):
            ratios = trace.ratios(key)

            self.assertEqual(len(ratios), 6)
            self.assertTrue(all(ratio >= INVERSE_E for ratio in ratios))
            self.assertAlmostEqual(ratios[-1], 0.5, delta=0.01)

    def test_failed_sample(self):
        curve = Curve.cartesian(
            parse("t"), parse("sqrt(1 - t)"), (0.0, math.inf)
        )
        trace = arc_ratio_trace(curve, [2.0, 0.5, 0.25])

        self.assertTrue(trace.samples[0].failed)
        self.assertEqual(len(trace.completed), 2)


class TestEq6(unittest.TestCase):
    def test_smooth_curve(self):
        """
        Check L(t)/D(t) -> 1 for a curve with a tangent at its start
        """

        seq = [0.5**k for k in range(20)]
        report = eq6_check(parabola(), seq)

        self.assertEqual(report.verdict, Verdict.HOLDS)
        self.assertLess(report.deviation, 1e-4)
        self.assertEqual(len(report.samples), 20)

    def test_spiral(self):
        """
        Check L(t)/D(t) stays at sqrt(2) on the logarithmic spiral
        """

        seq = make_sequence(to_minus_inf(count=12))
        report = eq6_check(log_spiral(1.0), seq)

        for sample in report.samples:
            self.assertAlmostEqual(sample.ratio, math.sqrt(2), delta=1e-6)

        self.assertNotEqual(report.verdict, Verdict.HOLDS)
        self.assertAlmostEqual(
            report.deviation, math.sqrt(2) - 1, delta=1e-6
        )


class TestExploreConjecture(unittest.TestCase):
    def test_parabola(self):
        seq = [0.5**k for k in range(10)]
        report = explore_conjecture(parabola(), seq)

        self.assertEqual(report.verdict, Verdict.HOLDS)
        self.assertEqual(report.attempts, 1)
        self.assertEqual(
            [key for key, _ in report.estimates], ["ratio_ls", "ratio_lt"]
        )

    def test_undefined_curve(self):
        """
        Check a curve that can't be evaluated at the first t fails the
        up-front length check
        """

        curve = Curve.cartesian(
            parse("t"), parse("sqrt(0.5 - t)"), (0.0, math.inf)
        )

        with self.assertRaises(NumericalError):
            explore_conjecture(curve, [1.0, 0.5, 0.25])


if __name__ == "__main__":
    unittest.main()

# Standard library
import math
import unittest

# Packages
import numpy as np
from scipy.integrate import quad

# Local
from canonicalwebteam.curveasym import (
    Curve,
    Domain,
    arc_length,
    distance_from_start,
    eval_derivative,
    eval_point,
    transformed,
)
from canonicalwebteam.curveasym.curve import evaluate
from canonicalwebteam.curveasym.exceptions import (
    AccuracyError,
    InputError,
    StencilError,
)
from canonicalwebteam.curveasym.parsers import parse
from canonicalwebteam.curveasym.quadrature import adaptive_simpson, integrate


def circle():
    return Curve.cartesian(
        np.sin,
        lambda t: 2.0 * np.square(np.sin(np.asarray(t) / 2.0)),
        (0.0, 2 * math.pi),
        dx=np.cos,
        dy=np.sin,
    )


class TestCurve(unittest.TestCase):
    def test_constructors(self):
        """
        Check each kind of curve knows its start point
        """

        graph = Curve.graph(parse("t^2 + 1"), (0.0, math.inf))
        self.assertEqual(graph.start_point, (0.0, 1.0))

        plane = Curve.cartesian(parse("cos(t)"), parse("sin(t)"), (0, 1))
        self.assertEqual(plane.start_point, (1.0, 0.0))

        polar = Curve.polar(parse("t"), (0.0, math.inf))
        self.assertEqual(polar.start_point, (0.0, 0.0))

    def test_start_required(self):
        """
        Check a curve from -inf needs an explicit start point, and a
        polar curve must start at the pole
        """

        with self.assertRaises(InputError):
            Curve.cartesian(parse("exp(t)"), parse("0"), (-math.inf, 0))

        with self.assertRaises(InputError):
            Curve.polar(parse("t + 1"), (0.0, 1.0))

        with self.assertRaises(InputError):
            Domain(1.0, 1.0)

    def test_half_a_derivative(self):
        """
        Check dx without dy, or dy without dx, is refused
        """

        with self.assertRaises(InputError):
            Curve.cartesian(np.sin, np.cos, (0.0, 1.0), dx=np.cos)

        with self.assertRaises(InputError):
            Curve.cartesian(np.sin, np.cos, (0.0, 1.0), dy=np.sin)

    def test_immutable(self):
        curve = circle()

        with self.assertRaises(AttributeError):
            curve.name = "other"

    def test_points(self):
        """
        Check positions and distances, including at the start
        """

        curve = Curve.polar(parse("t"), (0.0, math.inf))
        x, y = eval_point(curve, math.pi / 2)

        self.assertAlmostEqual(x, 0.0)
        self.assertAlmostEqual(y, math.pi / 2)
        self.assertAlmostEqual(distance_from_start(curve, 2.0), 2.0)
        self.assertEqual(distance_from_start(curve, 0.0), 0.0)

        with self.assertRaises(InputError):
            eval_point(curve, -1.0)

    def test_numeric_derivative(self):
        """
        Check central differences when no derivative is given
        """

        curve = Curve.cartesian(parse("t"), parse("sin(t)"), (0.0, 5.0))
        dx, dy = eval_derivative(curve, 1.0)

        self.assertAlmostEqual(dx, 1.0, delta=1e-8)
        self.assertAlmostEqual(dy, math.cos(1.0), delta=1e-8)

    def test_stencil_too_close_to_start(self):
        curve = Curve.cartesian(parse("t"), parse("t^2"), (0.0, 1.0))

        with self.assertRaises(StencilError):
            eval_derivative(curve, 1e-17)

    def test_evaluate_math_functions(self):
        """
        Check evaluators that only take floats still work on arrays
        """

        values = evaluate(math.sin, np.array([0.0, 1.0]))

        np.testing.assert_allclose(values, [0.0, math.sin(1.0)])
        np.testing.assert_allclose(
            evaluate(lambda t: 2.0, np.zeros(3)), [2.0, 2.0, 2.0]
        )
        self.assertIsInstance(evaluate(math.sin, 1.0), float)

    def test_transformed(self):
        """
        Check a moved curve keeps its distances up to the scale
        """

        curve = circle()
        moved = transformed(
            curve, rotation=1.1, translation=(2.0, 5.0), scale=3.0
        )

        self.assertEqual(moved.start_point, (2.0, 5.0))

        for t in (0.1, 1.0, 3.0):
            self.assertAlmostEqual(
                distance_from_start(moved, t),
                3.0 * distance_from_start(curve, t),
                places=12,
            )

        with self.assertRaises(InputError):
            transformed(curve, scale=0.0)


class TestArcLength(unittest.TestCase):
    def test_circle(self):
        self.assertAlmostEqual(arc_length(circle(), 0.5, 2.5), 2.0, places=9)

    def test_parabola(self):
        """
        Check the arc length of t^2 against scipy's quad
        """

        curve = Curve.graph(
            lambda t: np.square(t),
            (0.0, math.inf),
            df=lambda t: 2.0 * np.asarray(t),
        )
        expected, _ = quad(lambda t: math.sqrt(1 + 4 * t * t), 0.2, 1.5)

        self.assertAlmostEqual(
            arc_length(curve, 0.2, 1.5), expected, delta=1e-8
        )

        # Additive, and never shorter than the chord
        whole = arc_length(curve, 0.1, 1.3)
        self.assertAlmostEqual(
            arc_length(curve, 0.1, 0.7) + arc_length(curve, 0.7, 1.3),
            whole,
            delta=1e-8,
        )
        self.assertGreaterEqual(whole, math.hypot(1.2, 1.69 - 0.01))

    def test_backwards(self):
        with self.assertRaises(InputError):
            arc_length(circle(), 2.0, 1.0)


class TestQuadrature(unittest.TestCase):
    def test_integrals(self):
        self.assertAlmostEqual(
            adaptive_simpson(math.sin, 0.0, math.pi), 2.0, places=10
        )
        self.assertAlmostEqual(
            integrate(lambda t: t * t, 0.0, 1.0), 1.0 / 3.0, places=12
        )
        self.assertEqual(integrate(math.exp, 1.0, 1.0), 0.0)
        self.assertAlmostEqual(
            adaptive_simpson(math.cos, math.pi / 2, 0.0), -1.0, places=10
        )

    def test_accuracy_error(self):
        """
        Check running out of bisections raises with the best estimate
        """

        with self.assertRaises(AccuracyError) as context:
            adaptive_simpson(
                lambda t: math.sin(50 * t), 0.0, 10.0, max_levels=2
            )

        self.assertTrue(math.isfinite(context.exception.best_estimate))


if __name__ == "__main__":
    unittest.main()

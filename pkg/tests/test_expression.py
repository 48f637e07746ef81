# Standard library
import math
import unittest

# Packages
import numpy as np

# Local
from canonicalwebteam.curveasym.exceptions import (
    DomainEvaluationError,
    ExpressionSyntaxError,
    UnknownIdentifierError,
)
from canonicalwebteam.curveasym.parsers import parse
from canonicalwebteam.curveasym.parsers.expression import (
    FUNCTIONS,
    BinaryOp,
    Call,
    Constant,
    Negate,
    Number,
    Variable,
)


def random_tree(rng, depth):
    if depth == 0 or rng.random() < 0.2:
        choice = rng.integers(3)

        if choice == 0:
            return Number(float(round(rng.uniform(0.0, 10.0), 3)))
        if choice == 1:
            return Constant(str(rng.choice(["pi", "e"])))
        return Variable()

    choice = rng.integers(3)

    if choice == 0:
        return Negate(random_tree(rng, depth - 1))
    if choice == 1:
        return BinaryOp(
            str(rng.choice(list("+-*/^"))),
            random_tree(rng, depth - 1),
            random_tree(rng, depth - 1),
        )

    name = str(rng.choice(sorted(FUNCTIONS)))
    args = tuple(
        random_tree(rng, depth - 1) for _ in range(FUNCTIONS[name])
    )
    return Call(name, args)


class TestParse(unittest.TestCase):
    def test_tree(self):
        """
        Check function calls, products and numbers end up in the tree
        """

        expr = parse("exp(2*t)")

        self.assertEqual(
            expr.root,
            Call("exp", (BinaryOp("*", Number(2.0), Variable()),)),
        )
        self.assertEqual(expr(0.0), 1.0)

    def test_precedence(self):
        """
        Check unary minus binds looser than ^, and ^ is right-associative
        """

        self.assertEqual(parse("-2^2")(0.0), -4.0)
        self.assertEqual(parse("2^3^2")(0.0), 512.0)
        self.assertEqual(parse("1+2*3")(0.0), 7.0)
        self.assertEqual(parse("8/4/2")(0.0), 1.0)
        self.assertAlmostEqual(parse("-(-t)^1.5")(-4.0), -8.0, places=12)

    def test_constants_and_functions(self):
        """
        Check the constants and the function table
        """

        self.assertAlmostEqual(parse("arccot(1)")(0.0), math.pi / 4)
        self.assertAlmostEqual(parse("arccot(t)")(-1.0), 3 * math.pi / 4)
        self.assertAlmostEqual(
            parse("arccot(t) + arccot(-t)")(2.5), math.pi, places=12
        )
        self.assertAlmostEqual(parse("ln(t)")(math.e), 1.0, places=12)
        self.assertAlmostEqual(parse("pow(t, 2)")(3.0), 9.0)
        self.assertAlmostEqual(parse("abs(t)")(-2.0), 2.0)
        self.assertAlmostEqual(parse("sqrt(t)")(16.0), 4.0)
        self.assertAlmostEqual(parse("sin(pi/2)")(0.0), 1.0)

    def test_round_trip(self):
        """
        Check printing a tree and parsing it back gives the same tree
        """

        rng = np.random.default_rng(7)

        for _ in range(200):
            root = random_tree(rng, 4)
            expr = parse(str(root))

            self.assertEqual(expr.root, root)
            self.assertEqual(parse(str(expr)), expr)

    def test_is_constant(self):
        """
        Check expressions without t are reported as constant
        """

        self.assertTrue(parse("2*pi + e").is_constant)
        self.assertFalse(parse("sin(t)").is_constant)
        self.assertFalse(parse("pow(2, t)").is_constant)


class TestEvaluate(unittest.TestCase):
    def test_scalar_is_float(self):
        """
        Check a float argument gives a float back
        """

        value = parse("t^2")(3.0)

        self.assertIsInstance(value, float)
        self.assertEqual(value, 9.0)

    def test_array(self):
        """
        Check arrays evaluate elementwise, constants broadcast
        """

        ts = np.array([1.0, 2.0, 3.0])

        np.testing.assert_allclose(parse("t^2")(ts), [1.0, 4.0, 9.0])
        np.testing.assert_allclose(parse("2")(ts), [2.0, 2.0, 2.0])

    def test_domain_errors(self):
        """
        Check points without a finite real value raise
        DomainEvaluationError instead of returning nan or inf
        """

        with self.assertRaises(DomainEvaluationError):
            parse("t^t")(-0.5)

        with self.assertRaises(DomainEvaluationError) as context:
            parse("ln(t)")(0.0)

        self.assertEqual(context.exception.function, "ln")
        self.assertEqual(context.exception.value, 0.0)

        with self.assertRaises(DomainEvaluationError):
            parse("1/t")(0.0)

        with self.assertRaises(DomainEvaluationError):
            parse("sqrt(t)")(np.array([1.0, -1.0]))

        with self.assertRaises(DomainEvaluationError):
            parse("exp(t)")(1000.0)

    def test_integer_powers_of_negatives(self):
        """
        Check integer exponents are fine on negative bases
        """

        self.assertEqual(parse("t^3")(-2.0), -8.0)
        self.assertEqual(parse("t^-2")(-2.0), 0.25)


class TestSyntaxErrors(unittest.TestCase):
    def test_unknown_identifier(self):
        """
        Check unknown names report their offset and name
        """

        with self.assertRaises(UnknownIdentifierError) as context:
            parse("2*foo(t)")

        self.assertEqual(context.exception.offset, 2)
        self.assertEqual(context.exception.name, "foo")

    def test_offsets(self):
        """
        Check syntax errors point at the offending character
        """

        with self.assertRaises(ExpressionSyntaxError) as context:
            parse("(t+1")

        self.assertEqual(context.exception.offset, 4)

        with self.assertRaises(ExpressionSyntaxError) as context:
            parse("t $ 2")

        self.assertEqual(context.exception.offset, 2)

    def test_byte_offsets(self):
        """
        Check offsets count UTF-8 bytes past non-ASCII whitespace
        """

        with self.assertRaises(ExpressionSyntaxError) as context:
            parse("t +\u00a0$")

        self.assertEqual(context.exception.offset, 5)

        with self.assertRaises(UnknownIdentifierError) as context:
            parse("\u2003\u2003foo(t)")

        self.assertEqual(context.exception.offset, 6)

    def test_no_implicit_multiplication(self):
        with self.assertRaises(ExpressionSyntaxError) as context:
            parse("2t")

        self.assertEqual(context.exception.offset, 1)

    def test_empty_and_arity(self):
        """
        Check empty text and wrong argument counts are rejected
        """

        for text in ("", "   "):
            with self.assertRaises(ExpressionSyntaxError):
                parse(text)

        with self.assertRaises(ExpressionSyntaxError):
            parse("pow(t)")

        with self.assertRaises(ExpressionSyntaxError):
            parse("sin(t, 2)")


if __name__ == "__main__":
    unittest.main()

# Standard library
import unittest

# Local
from canonicalwebteam.curveasym.catalog import (
    CATALOG,
    build,
    catalog_list,
    get_entry,
)
from canonicalwebteam.curveasym.exceptions import InputError


class TestCatalog(unittest.TestCase):
    def test_groups(self):
        curves = {entry["name"] for entry in catalog_list("curve")}
        problems = {entry["name"] for entry in catalog_list("meanvalue")}

        self.assertIn("ex1", curves)
        self.assertIn("lagrange-extremal", problems)
        self.assertEqual(len(catalog_list()), len(CATALOG))
        self.assertFalse(curves & problems)

    def test_build(self):
        """
        Check entries build with their default or a given parameter
        """

        curve, spec, value = build("ex2")

        self.assertEqual(value, 1.0)
        self.assertEqual(curve.kind, "polar")
        self.assertEqual(spec.mode, "geometric_to_finite")

        _, spec, value = build("ex3", 3.0)

        self.assertEqual(value, 3.0)
        self.assertEqual(spec.b, 0.0)

    def test_unknown(self):
        with self.assertRaises(InputError):
            get_entry("ex9")

        with self.assertRaises(InputError):
            get_entry("ex1", group="meanvalue")

    def test_parameters(self):
        """
        Check entries without a parameter refuse one, and parameters
        outside a family's range are refused
        """

        with self.assertRaises(InputError):
            build("parabola", 2.0)

        for name, value in (("ex1", 0.0), ("ex3", 1.0), ("powerweight", -2)):
            with self.subTest(name=name):
                with self.assertRaises(InputError):
                    build(name, value)


if __name__ == "__main__":
    unittest.main()

import math
import unittest

from ezqhdl.errors import QHDLSyntaxError, DesignError
from ezqhdl.qhdl.expressions import parse_expression, parse_value, NumericKind, GenericExpression


class ExpressionTest(unittest.TestCase):

    def test_literals(self):
        self.assertEqual(3, parse_expression("3").evaluate())
        self.assertEqual(2.5, parse_expression("2.5").evaluate())
        self.assertEqual(complex(-34.289, -11.909), parse_expression("(-34.289, -11.909)").evaluate())

    def test_precedence(self):
        self.assertEqual(7, parse_expression("1 + 2 * 3").evaluate())
        self.assertEqual(9, parse_expression("(1 + 2) * 3").evaluate())
        self.assertAlmostEqual(-5.0 / 6.0, parse_expression("-5.0 / 6.0").evaluate())
        self.assertEqual(1, parse_expression("4 - 2 - 1").evaluate())
        self.assertEqual(3, parse_expression("4 - (2 - 1)").evaluate())

    def test_pi(self):
        self.assertAlmostEqual(math.pi / 4, parse_expression("pi / 4").evaluate())
        self.assertEqual(frozenset(), parse_expression("PI").names)

    def test_names_are_deferred(self):
        expression = parse_expression("2 * Kappa + theta")
        self.assertEqual(frozenset({"kappa", "theta"}), expression.names)
        self.assertEqual(11, expression.evaluate({"kappa": 5, "theta": 1}))

    def test_missing_name(self):
        with self.assertRaises(KeyError):
            parse_expression("kappa / 2").evaluate({})

    def test_complex_arithmetic(self):
        value = parse_expression("beta * 2").evaluate({"beta": 1 + 1j})
        self.assertEqual(2 + 2j, value)

    def test_canonical_text_is_stable(self):
        for text in ["1+2*3", "(1 + 2) * 3", "-(-x)", "- 5.0 / 6.0", "a - (b - c)", "(re, -im)", "-(a + b)"]:
            canonical = parse_expression(text)
            self.assertEqual(canonical, parse_expression(canonical.text), text)

    def test_canonical_text(self):
        self.assertEqual("1 + 2 * 3", parse_expression("1+2*3").text)
        self.assertEqual("(1 + 2) * 3", parse_expression("((1 + 2)) * 3").text)
        self.assertEqual("-5.0 / 6.0", parse_expression("- 5.0 / 6.0").text)

    def test_kind_inference(self):
        kinds = {"theta": NumericKind.REAL, "beta": NumericKind.COMPLEX, "n": NumericKind.INT}
        self.assertEqual(NumericKind.INT, parse_expression("n * 2").kind(kinds))
        self.assertEqual(NumericKind.REAL, parse_expression("n / 2").kind(kinds))
        self.assertEqual(NumericKind.REAL, parse_expression("theta + 1").kind(kinds))
        self.assertEqual(NumericKind.COMPLEX, parse_expression("beta * theta").kind(kinds))
        self.assertEqual(NumericKind.COMPLEX, parse_expression("(theta, 0)").kind(kinds))

    def test_kind_with_zero_sample(self):
        kinds = {"a": NumericKind.INT}
        self.assertEqual(NumericKind.REAL, parse_expression("1 / (a - 1)").kind(kinds))

    def test_malformed(self):
        for text in ["1 +", "(1, 2", "* 3", "1 2", ""]:
            with self.assertRaises(QHDLSyntaxError, msg=text):
                parse_expression(text)

    def test_complex_components_must_be_real(self):
        with self.assertRaises(TypeError):
            parse_expression("((1, 2), 3)").evaluate()

    def test_literal(self):
        self.assertEqual(1.5, GenericExpression.literal(1.5).evaluate())
        self.assertEqual(1 - 2j, parse_expression(GenericExpression.literal(1 - 2j).text).evaluate())


class NumericKindTest(unittest.TestCase):

    def test_inclusion(self):
        self.assertTrue(NumericKind.REAL.accepts(1))
        self.assertTrue(NumericKind.COMPLEX.accepts(1.5))
        self.assertFalse(NumericKind.REAL.accepts(1j))
        self.assertFalse(NumericKind.INT.accepts(1.5))

    def test_coerce(self):
        self.assertIsInstance(NumericKind.REAL.coerce(1), float)
        self.assertIsInstance(NumericKind.COMPLEX.coerce(1.0), complex)
        with self.assertRaises(TypeError):
            NumericKind.INT.coerce(0.5)


class ParseValueTest(unittest.TestCase):

    def test_plain(self):
        self.assertEqual(0.891, parse_value("0.891"))
        self.assertAlmostEqual(math.pi / 2, parse_value("pi/2"))

    def test_complex_forms(self):
        self.assertEqual(complex(-34.289, -11.909), parse_value("-34.289,-11.909"))
        self.assertEqual(complex(1, 2), parse_value("(1, 2)"))

    def test_rejects_names(self):
        with self.assertRaises(DesignError):
            parse_value("theta * 2")

    def test_division_by_zero(self):
        with self.assertRaises(DesignError) as ctx:
            parse_value("1 / 0")
        self.assertIn("cannot evaluate", str(ctx.exception))

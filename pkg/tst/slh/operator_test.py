import unittest

import numpy as np

from ezqhdl.errors import SpaceMismatchError
from ezqhdl.slh.hilbert_space import HilbertSpace
from ezqhdl.slh.operator import Operator


class HilbertSpaceTest(unittest.TestCase):

    def test_modes_are_sorted(self):
        space = HilbertSpace([("b", 3), ("a", 2)])
        self.assertEqual(["a", "b"], space.labels)
        self.assertEqual(6, space.dimension)
        self.assertEqual(space, HilbertSpace.mode("a", 2).union(HilbertSpace.mode("b", 3)))

    def test_conflicting_dimensions(self):
        with self.assertRaises(SpaceMismatchError):
            HilbertSpace([("a", 2), ("a", 3)])

    def test_trivial(self):
        self.assertTrue(HilbertSpace.trivial().is_trivial())
        self.assertEqual(1, HilbertSpace.trivial().dimension)
        self.assertEqual(HilbertSpace.mode("a", 2), HilbertSpace.trivial().union(HilbertSpace.mode("a", 2)))

    def test_dim_of(self):
        space = HilbertSpace([("a", 2), ("b", 3)])
        self.assertEqual(3, space.dim_of("b"))
        with self.assertRaises(SpaceMismatchError):
            space.dim_of("c")


class OperatorTest(unittest.TestCase):

    def test_ladder_operators(self):
        a = Operator.annihilation("a", 4)
        n = Operator.number("a", 4)
        self.assertTrue((a.dag() * a).allclose(n))

        commutator = (a * a.dag() - a.dag() * a).to_dense()
        np.testing.assert_allclose(np.diag([1, 1, 1, -3]), commutator)

    def test_embedding_orders_factors_by_label(self):
        a = Operator.annihilation("a", 2)
        b = Operator.annihilation("b", 3)
        space = HilbertSpace([("a", 2), ("b", 3)])

        np.testing.assert_allclose(np.kron(a.to_dense(), np.eye(3)), a.embed(space).to_dense())
        np.testing.assert_allclose(np.kron(np.eye(2), b.to_dense()), b.embed(space).to_dense())
        np.testing.assert_allclose(np.kron(a.to_dense(), b.to_dense()), (b * a).to_dense())

    def test_embedding_into_unrelated_space(self):
        with self.assertRaises(SpaceMismatchError):
            Operator.annihilation("a", 2).embed(HilbertSpace.mode("b", 2))

    def test_scalars(self):
        x = Operator.scalar(2) + 3j
        self.assertTrue(x.is_scalar())
        self.assertEqual(2 + 3j, x.scalar_value())
        self.assertTrue((1 - Operator.scalar(1)).is_zero())

    def test_scalar_meets_mode(self):
        shifted = Operator.number("a", 3) + 1
        np.testing.assert_allclose(np.diag([1, 2, 3]), shifted.to_dense())

    def test_imag_part(self):
        a = Operator.annihilation("a", 3)
        x = 1j * a
        self.assertTrue(x.imag_part().allclose((a + a.dag()) / 2))
        self.assertAlmostEqual(0.0, x.imag_part().hermitian_residual())

    def test_transition(self):
        t = Operator.transition("s", 3, 2, 0)
        expected = np.zeros((3, 3))
        expected[2, 0] = 1
        np.testing.assert_allclose(expected, t.to_dense())

    def test_relabel_reorders_factors(self):
        op = Operator.annihilation("a", 2) * Operator.number("b", 3)
        renamed = op.relabel(lambda label: {"a": "z", "b": "b"}[label])
        self.assertEqual(["b", "z"], renamed.space.labels)
        expected = Operator.annihilation("z", 2) * Operator.number("b", 3)
        self.assertTrue(renamed.allclose(expected))

    def test_shape_must_fit_space(self):
        with self.assertRaises(SpaceMismatchError):
            Operator(HilbertSpace.mode("a", 2), np.eye(3))

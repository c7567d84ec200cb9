import itertools
import unittest

import numpy as np

from ezqhdl import permutations
from ezqhdl.circuit.expression import ComponentRef, Series, Concatenation, Feedback, Permutation, Identity, \
    series, concat, feedback, leaves, count_feedback
from ezqhdl.errors import CircuitError


def ref(label: str, n: int = 1) -> ComponentRef:
    return ComponentRef(label, label, n)


def _matrix(sigma) -> np.ndarray:
    """
    Column l holds a single 1 in the row of the output channel fed by input l.
    """
    n = len(sigma)
    m = np.zeros((n, n), dtype=int)
    m[np.array(sigma) - 1, np.arange(n)] = 1
    return m


class CircuitExpressionTest(unittest.TestCase):

    def test_series_feeds_downstream(self):
        a, b = ref("a", 2), ref("b", 2)
        e = series(a, b)
        self.assertEqual(Series(b, a), e)
        self.assertEqual(2, e.cdim)
        self.assertEqual("b ◁ a", e.to_text())

    def test_series_dimension_mismatch(self):
        with self.assertRaises(CircuitError):
            series(ref("a", 1), ref("b", 2))

    def test_concat_flattens(self):
        a, b, c = ref("a"), ref("b", 2), ref("c")
        e = concat([concat([a, b]), c])
        self.assertEqual(Concatenation((a, b, c)), e)
        self.assertEqual(4, e.cdim)
        self.assertEqual(a, concat([a]))

    def test_concat_empty(self):
        with self.assertRaises(CircuitError):
            concat([])

    def test_feedback(self):
        e = feedback(ref("k", 3), 2, 1)
        self.assertEqual(2, e.cdim)
        self.assertEqual("[k]_{2→1}", e.to_text())

    def test_feedback_out_of_range(self):
        with self.assertRaises(CircuitError):
            feedback(ref("k", 2), 3, 1)
        with self.assertRaises(CircuitError):
            feedback(ref("k", 1), 1, 1)

    def test_permutation_must_be_bijective(self):
        self.assertEqual(3, Permutation((2, 3, 1)).cdim)
        with self.assertRaises(CircuitError):
            Permutation((1, 1, 2))

    def test_identity(self):
        self.assertEqual("1_2", Identity(2).to_text())
        with self.assertRaises(CircuitError):
            Identity(0)

    def test_text_parenthesizes_mixed_operations(self):
        e = series(concat([ref("a"), ref("b")]), Permutation((2, 1)))
        self.assertEqual("P(2,1) ◁ (a ⊞ b)", e.to_text())

    def test_structural_equality(self):
        self.assertEqual(series(ref("a", 2), ref("b", 2)), series(ref("a", 2), ref("b", 2)))
        self.assertNotEqual(series(ref("a", 2), ref("b", 2)), series(ref("b", 2), ref("a", 2)))

    def test_leaves_and_feedback_count(self):
        e = feedback(series(concat([ref("a"), ref("b")]), ref("c", 2)), 1, 2)
        self.assertEqual(["a", "b", "c"], [leaf.label for leaf in leaves(e)])
        self.assertEqual(1, count_feedback(e))


class PermutationsTest(unittest.TestCase):

    def test_compose(self):
        self.assertEqual((3, 1, 2), permutations.compose((2, 3, 1), (2, 3, 1)))

    def test_invert(self):
        sigma = (3, 1, 4, 2)
        self.assertEqual(permutations.identity_permutation(4),
                         permutations.compose(sigma, permutations.invert(sigma)))

    def test_is_permutation(self):
        self.assertTrue(permutations.is_permutation([1]))
        self.assertFalse(permutations.is_permutation([]))
        self.assertFalse(permutations.is_permutation([0, 1]))

    def test_groups_up_to_five_channels(self):
        for n in range(1, 6):
            group = list(itertools.permutations(range(1, n + 1)))
            identity = permutations.identity_permutation(n)

            for sigma in group:
                inverse = permutations.invert(sigma)
                self.assertEqual(identity, permutations.compose(sigma, inverse))
                self.assertEqual(identity, permutations.compose(inverse, sigma))
                self.assertEqual(sigma, permutations.compose(sigma, identity))
                self.assertEqual(sigma, permutations.compose(identity, sigma))

            for sigma_2, sigma_1 in itertools.product(group, repeat=2):
                composed = permutations.compose(sigma_2, sigma_1)
                self.assertTrue(permutations.is_permutation(composed))
                self.assertEqual(permutations.invert(composed),
                                 permutations.compose(permutations.invert(sigma_1), permutations.invert(sigma_2)))

    def test_compose_is_matrix_product(self):
        for n in range(1, 5):
            group = list(itertools.permutations(range(1, n + 1)))
            for sigma_2, sigma_1 in itertools.product(group, repeat=2):
                np.testing.assert_array_equal(_matrix(sigma_2) @ _matrix(sigma_1),
                                              _matrix(permutations.compose(sigma_2, sigma_1)))

    def test_compose_is_associative(self):
        group = list(itertools.permutations(range(1, 5)))
        for a, b, c in itertools.product(group, repeat=3):
            self.assertEqual(permutations.compose(a, permutations.compose(b, c)),
                             permutations.compose(permutations.compose(a, b), c))

import unittest

import numpy as np

from ezqhdl.circuit.expression import CircuitExpression, ComponentRef, Series, Concatenation, Feedback, \
    Permutation, Identity, concat
from ezqhdl.circuit.simplify import simplify
from ezqhdl.errors import FeedbackError
from ezqhdl.slh.evaluate import ComponentBinding, evaluate
from ezqhdl.slh.triplet import SLHTriplet

MAX_CHANNELS = 3


def ref(label: str, n: int = 1) -> ComponentRef:
    return ComponentRef(label, label, n)


def random_expression(rng: np.random.Generator, n: int, depth: int) -> CircuitExpression:
    """
    Random well-formed expression with n channels over the components bound by _static_bindings.
    """
    if depth == 0 or rng.random() < 0.3:
        leaf = rng.integers(3)
        if leaf == 0:
            return ref(f"c{n}_{rng.integers(2)}", n)
        if leaf == 1:
            return Permutation(tuple(int(s) for s in rng.permutation(n) + 1))
        return Identity(n)

    choices = ["series", "feedback"] + (["concat"] if n > 1 else [])
    choice = choices[rng.integers(len(choices))]

    if choice == "concat":
        split = int(rng.integers(1, n))
        return Concatenation((random_expression(rng, split, depth - 1), random_expression(rng, n - split, depth - 1)))

    if choice == "feedback" and n < MAX_CHANNELS:
        k, l = (int(i) for i in rng.integers(1, n + 2, size=2))
        return Feedback(random_expression(rng, n + 1, depth - 1), k, l)

    return Series(random_expression(rng, n, depth - 1), random_expression(rng, n, depth - 1))


def _static_bindings(rng: np.random.Generator) -> ComponentBinding:
    bindings = ComponentBinding()
    for n in range(1, MAX_CHANNELS + 1):
        for i in range(2):
            unitary, _ = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
            L = [complex(rng.normal(), rng.normal()) for _ in range(n)]
            bindings.bind(f"c{n}_{i}", SLHTriplet(unitary.tolist(), L, float(rng.normal())))

    return bindings


class SimplifyTest(unittest.TestCase):

    def test_permutations_compose(self):
        e = Series(Permutation((2, 3, 1)), Permutation((2, 3, 1)))
        self.assertEqual(Permutation((3, 1, 2)), simplify(e))

    def test_inverse_permutations_cancel(self):
        e = Series(Permutation((2, 1)), Series(Permutation((2, 1)), ref("a", 2)))
        self.assertEqual(ref("a", 2), simplify(e))

    def test_identity_permutation(self):
        self.assertEqual(Identity(3), simplify(Permutation((1, 2, 3))))

    def test_identity_factors_drop(self):
        a = ref("a", 2)
        self.assertEqual(a, simplify(Series(Identity(2), Series(a, Identity(2)))))

    def test_adjacent_identities_merge(self):
        e = Concatenation((ref("a"), Identity(1), Identity(2)))
        self.assertEqual(Concatenation((ref("a"), Identity(3))), simplify(e))

    def test_series_reassociates(self):
        a, b, c = ref("a", 2), ref("b", 2), ref("c", 2)
        self.assertEqual(Series(a, Series(b, c)), simplify(Series(Series(a, b), c)))

    def test_blocks_fuse(self):
        a, b, c, d = ref("a"), ref("b", 2), ref("c"), ref("d", 2)
        e = Series(concat([a, b]), concat([c, d]))
        self.assertEqual(Concatenation((Series(a, c), Series(b, d))), simplify(e))

    def test_misaligned_blocks_stay(self):
        a, b, c, d = ref("a"), ref("b", 2), ref("c", 2), ref("d")
        e = Series(concat([a, b]), concat([c, d]))
        self.assertEqual(e, simplify(e))

    def test_identity_padding_fuses(self):
        a, c = ref("a"), ref("c")
        e = Series(concat([a, Identity(1)]), concat([c, Identity(1)]))
        self.assertEqual(Concatenation((Series(a, c), Identity(1))), simplify(e))

    def test_fixpoint(self):
        a = ref("a", 2)
        e = Series(Permutation((2, 1)), Series(a, Identity(2)))
        once = simplify(e)
        self.assertEqual(once, simplify(once))


class SimplifyPropertyTest(unittest.TestCase):

    def test_random_expressions(self):
        rng = np.random.default_rng(31)
        bindings = _static_bindings(rng)

        checked = 0
        while checked < 200:
            e = random_expression(rng, int(rng.integers(1, MAX_CHANNELS + 1)), 4)
            try:
                expected = evaluate(e, bindings)
            except FeedbackError:
                # loop closed through wires only
                continue

            simplified = simplify(e)
            self.assertEqual(simplified, simplify(simplified), e.to_text())
            self.assertEqual(e.cdim, simplified.cdim)

            scale = max([1.0, expected.H.max_abs()] + [l.max_abs() for l in expected.L])
            self.assertLess(evaluate(simplified, bindings).max_difference(expected), 1e-8 * scale, e.to_text())
            checked += 1

import os
import tempfile
import unittest

import numpy as np
import scipy.linalg

from ezqhdl.errors import ReductionError
from ezqhdl.reduction.markov import estimate_markov, to_rate_matrix, positive_rates, write_counts


class EstimateMarkovTest(unittest.TestCase):

    def test_counts(self):
        estimate = estimate_markov({"HOLD": [np.array([0, 0, 1, 1, 0])]}, 2, 0.1)
        np.testing.assert_array_equal([[1, 1], [1, 1]], estimate.counts["HOLD"])
        self.assertEqual(4, estimate.transitions("HOLD"))
        np.testing.assert_allclose([[0.5, 0.5], [0.5, 0.5]], estimate.transition_matrix("HOLD"))

    def test_counts_add_over_sequences(self):
        estimate = estimate_markov({"SET": [np.array([0, 1]), np.array([0, 1, 2]), np.array([2])]}, 3, 1.0)
        np.testing.assert_array_equal([[0, 2, 0], [0, 0, 1], [0, 0, 0]], estimate.counts["SET"])

    def test_unvisited_rows_stay(self):
        P = estimate_markov({"HOLD": [np.array([0, 1, 1])]}, 3, 1.0).transition_matrix("HOLD")
        np.testing.assert_allclose([[0, 1, 0], [0, 1, 0], [0, 0, 1]], P)

    def test_two_state_chain(self):
        rng = np.random.default_rng(5)
        stay = {0: 0.9, 1: 0.8}
        states = [0]
        for _ in range(40000):
            s = states[-1]
            states.append(s if rng.random() < stay[s] else 1 - s)

        P = estimate_markov({"HOLD": [np.array(states)]}, 2, 0.01).transition_matrix("HOLD")
        np.testing.assert_allclose([[0.9, 0.1], [0.2, 0.8]], P, atol=0.015)

    def test_sampled_generator(self):
        Q = np.array([[-2.0, 1.5, 0.5], [1.0, -1.0, 0.0], [0.0, 3.0, -3.0]])
        delta_t = 0.1
        P = scipy.linalg.expm(Q * delta_t)

        rng = np.random.default_rng(17)
        cumulative = np.cumsum(P, axis=1)
        states = [0]
        for u in rng.random(200000):
            states.append(min(int(np.searchsorted(cumulative[states[-1]], u)), 2))

        estimate = estimate_markov({"HOLD": [np.array(states)]}, 3, delta_t)
        np.testing.assert_allclose(P, estimate.transition_matrix("HOLD"), atol=0.015)
        np.testing.assert_allclose((P - np.eye(3)) / delta_t, to_rate_matrix(estimate)["HOLD"], atol=0.15)

    def test_errors(self):
        with self.assertRaises(ReductionError):
            estimate_markov({"HOLD": [np.array([0, 2])]}, 2, 0.1)
        with self.assertRaises(ReductionError):
            estimate_markov({"HOLD": [np.array([0, 1])]}, 2, 0.0)
        with self.assertRaises(ReductionError):
            estimate_markov({}, 2, 0.1)


class RateMatrixTest(unittest.TestCase):

    def test_rates(self):
        estimate = estimate_markov({"HOLD": [np.array([0, 0, 1, 1, 0])], "SET": [np.array([0, 0])]}, 2, 0.1)
        rates = to_rate_matrix(estimate)

        np.testing.assert_allclose([[-5, 5], [5, -5]], rates["HOLD"])
        np.testing.assert_allclose(np.zeros((2, 2)), rates["SET"])
        np.testing.assert_allclose(0.0, rates["HOLD"].sum(axis=1), atol=1e-12)

    def test_positive_rates(self):
        Q = np.array([[-3.0, 1.0, 2.0], [0.0, 0.0, 0.0], [4.0, -1e-3, 0.0]])
        self.assertEqual([(0, 1, 1.0), (0, 2, 2.0), (2, 0, 4.0)], positive_rates(Q))

    def test_write_counts(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "counts_hold.csv")
            write_counts(path, np.array([[1, 2], [3, 4]]))
            with open(path) as f:
                self.assertEqual(["1,2", "3,4"], f.read().splitlines())

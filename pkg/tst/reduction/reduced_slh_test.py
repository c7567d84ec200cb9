import math
import unittest

import numpy as np

from ezqhdl.errors import ReductionError
from ezqhdl.reduction.reduced_slh import check_state_count, set_drift_pairs, reset_drift_pairs, drift_operators, \
    jump_slh, drive_slh, compose_reduced, output_slh
from ezqhdl.slh.components import beamsplitter
from ezqhdl.slh.operator import Operator
from ezqhdl.slh.triplet import SLHTriplet


class DriftOperatorsTest(unittest.TestCase):

    def test_state_count(self):
        self.assertEqual([1, 2, 9], [check_state_count(M) for M in [6, 10, 38]])
        for M in [2, 4, 7, 8]:
            with self.assertRaises(ReductionError):
                check_state_count(M)

    def test_pairs(self):
        self.assertEqual([(2, 5)], set_drift_pairs(6))
        self.assertEqual([(5, 2)], reset_drift_pairs(6))
        self.assertEqual([(6, 9), (4, 7)], set_drift_pairs(10))
        self.assertEqual([(5, 2), (7, 4)], reset_drift_pairs(10))

    def test_operators(self):
        sigma_s, sigma_r = drift_operators(6)
        self.assertTrue(sigma_s.allclose(Operator.transition("state", 6, 1, 4)))
        self.assertTrue(sigma_r.allclose(Operator.transition("state", 6, 4, 1)))

    def test_nilpotent_partial_isometries(self):
        for M in [6, 10, 38]:
            for sigma in drift_operators(M):
                self.assertTrue((sigma * sigma).is_zero())
                p = sigma.dag() * sigma
                q = sigma * sigma.dag()
                self.assertTrue((p * p).allclose(p))
                self.assertTrue((p * q).is_zero())


class DriveModelTest(unittest.TestCase):

    def test_unitary(self):
        for M in [6, 10, 38]:
            drive = drive_slh(M, 0.7)
            self.assertEqual(4, drive.n)
            unitarity, hermiticity = drive.residuals()
            self.assertLess(unitarity, 1e-12)
            self.assertEqual(0.0, hermiticity)

    def test_hold_cancels_coupling(self):
        alpha = 1.3 - 0.4j
        for M in [6, 10]:
            closed = compose_reduced(SLHTriplet.trivial(), drive_slh(M, alpha), alpha, alpha)
            self.assertEqual(4, closed.n)
            self.assertLess(max(l.max_abs() for l in closed.L), 1e-13)
            self.assertLess(closed.H.max_abs(), 1e-13)

    def test_set_drives_set_drift(self):
        alpha = 2.0
        sigma_s, _ = drift_operators(10)
        closed = compose_reduced(SLHTriplet.trivial(), drive_slh(10, alpha), 0, alpha)

        self.assertTrue(closed.L[2].allclose(-alpha * sigma_s))
        self.assertLess(closed.L[1].max_abs(), 1e-13)
        self.assertLess(closed.L[3].max_abs(), 1e-13)

    def test_jump_channels_follow(self):
        Q = np.zeros((6, 6))
        Q[0, 1], Q[0, 0] = 4.0, -4.0
        closed = compose_reduced(jump_slh(Q), drive_slh(6, 1.0), 1.0, 1.0)

        self.assertEqual(5, closed.n)
        self.assertTrue(closed.L[4].allclose(2.0 * Operator.transition("state", 6, 1, 0)))

    def test_drive_channel_count(self):
        with self.assertRaises(ReductionError):
            compose_reduced(SLHTriplet.trivial(), beamsplitter(math.pi / 4), 1.0, 1.0)


class JumpModelTest(unittest.TestCase):

    def test_no_rates(self):
        self.assertEqual(0, jump_slh(np.zeros((6, 6))).n)

    def test_two_states(self):
        jump = jump_slh(np.array([[-5.0, 5.0], [2.0, -2.0]]), "s")

        self.assertEqual(2, jump.n)
        self.assertTrue(jump.L[0].allclose(math.sqrt(5) * Operator.transition("s", 2, 1, 0)))
        self.assertTrue(jump.L[1].allclose(math.sqrt(2) * Operator.transition("s", 2, 0, 1)))
        self.assertTrue(jump.H.is_zero())
        self.assertEqual((0.0, 0.0), jump.residuals())


class OutputModelTest(unittest.TestCase):

    def test_state_dependent_routing(self):
        output = output_slh([(0.0, 0.0, 0.0), (math.pi / 2, 0.0, 0.0)], 1.0)

        np.testing.assert_allclose(np.diag([1, 0]), output.L[0].to_dense(), atol=1e-15)
        np.testing.assert_allclose(np.diag([0, 1]), output.L[1].to_dense(), atol=1e-15)
        self.assertLess(output.residuals()[0], 1e-12)

    def test_phases(self):
        output = output_slh([(0.0, math.pi, 0.0), (0.0, 0.0, 0.0)], 2.0)
        np.testing.assert_allclose(np.diag([-2.0, 2.0]), output.L[0].to_dense(), atol=1e-12)

    def test_empty(self):
        with self.assertRaises(ReductionError):
            output_slh([], 1.0)

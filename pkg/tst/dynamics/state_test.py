import unittest

import numpy as np

from ezqhdl.dynamics.config import SimulationConfig
from ezqhdl.dynamics.state import fock_state, parse_initial_state, parse_observable, parse_observables, \
    check_density_matrix, check_state_vector, density_matrix
from ezqhdl.errors import SimulationError
from ezqhdl.slh.hilbert_space import HilbertSpace

SPACE = HilbertSpace([("nand1.k", 3), ("nand2.k", 4)])


class InitialStateTest(unittest.TestCase):

    def test_fock_product(self):
        psi = fock_state(SPACE, {"NAND1.K": 1, "nand2.k": 2})
        self.assertEqual(1 * 4 + 2, int(np.argmax(np.abs(psi))))
        self.assertEqual(1.0, np.linalg.norm(psi))

    def test_vacuum_default(self):
        self.assertEqual(1.0, parse_initial_state(SPACE, [])[0])

    def test_parse(self):
        psi = parse_initial_state(SPACE, ["nand2.k=3"])
        self.assertEqual(3, int(np.argmax(np.abs(psi))))

    def test_bare_index_on_single_mode(self):
        psi = parse_initial_state(HilbertSpace.mode("state", 6), ["4"])
        self.assertEqual(4, int(np.argmax(np.abs(psi))))
        with self.assertRaises(SimulationError):
            parse_initial_state(SPACE, ["4"])

    def test_errors(self):
        with self.assertRaises(SimulationError):
            fock_state(SPACE, {"nand3.k": 1})
        with self.assertRaises(SimulationError):
            fock_state(SPACE, {"nand1.k": 3})
        with self.assertRaises(SimulationError):
            parse_initial_state(SPACE, ["nand1.k"])

    def test_checks(self):
        psi = fock_state(SPACE, {"nand1.k": 2})
        check_state_vector(psi)
        check_density_matrix(density_matrix(psi))
        with self.assertRaises(SimulationError):
            check_state_vector(2 * psi)
        with self.assertRaises(SimulationError):
            check_density_matrix(np.diag([1.5, -0.5] + [0.0] * 10))


class ObservableTest(unittest.TestCase):

    def test_number(self):
        n = parse_observable("n:NAND2.K", SPACE)
        self.assertEqual("n:nand2.k", n.name)
        self.assertAlmostEqual(2.0, n.expectation(fock_state(SPACE, {"nand2.k": 2})).real)

    def test_expectation_normalizes(self):
        n = parse_observable("n:nand1.k", SPACE)
        psi = 3.0 * fock_state(SPACE, {"nand1.k": 1})
        self.assertAlmostEqual(1.0, n.expectation(psi).real)
        self.assertAlmostEqual(1.0, n.expectation(density_matrix(psi / 3.0)).real)

    def test_projector(self):
        space = HilbertSpace.mode("state", 6)
        p = parse_observable("p:2", space)
        self.assertEqual(1.0, p.expectation(fock_state(space, {"state": 2})))
        self.assertEqual(0.0, p.expectation(fock_state(space, {"state": 1})))

    def test_defaults(self):
        self.assertEqual(["n:nand1.k", "n:nand2.k"], [o.name for o in parse_observables(None, SPACE)])

    def test_errors(self):
        for name in ["x:nand1.k", "nand1.k", "n:other", "p:1"]:
            with self.assertRaises(SimulationError, msg=name):
                parse_observable(name, SPACE)


class SimulationConfigTest(unittest.TestCase):

    def test_sampling(self):
        config = SimulationConfig(t_final=1.0, dt=1e-3, sample_interval=0.01)
        self.assertEqual(10, config.steps_per_sample)
        self.assertEqual(1000, config.n_steps)
        self.assertEqual(1e-3, SimulationConfig(t_final=1.0, dt=1e-3).sample_interval)

    def test_validation(self):
        with self.assertRaises(SimulationError):
            SimulationConfig(t_final=1.0, dt=0.0)
        with self.assertRaises(SimulationError):
            SimulationConfig(t_final=1.0, dt=0.1, sample_interval=0.01)
        with self.assertRaises(SimulationError):
            SimulationConfig(t_final=1.0, dt=0.1, trajectories=0)

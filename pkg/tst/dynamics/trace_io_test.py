import os
import tempfile
import unittest

import numpy as np

from ezqhdl.dynamics.config import ExpectationTrace
from ezqhdl.dynamics.mcwf import EnsembleResult
from ezqhdl.dynamics.trace_io import write_trace, read_trace, write_ensemble, read_ensemble_traces, \
    trajectory_file_name
from ezqhdl.errors import ModelFormatError


def _trace(offset: float = 0.0, conditions=None, jumps=None) -> ExpectationTrace:
    times = np.array([0.0, 0.1, 0.2])
    values = np.array([[1 / 3 + offset, 0.5j], [2 / 3, 1e-17 - 2j], [1.0, np.pi]], dtype=complex)
    return ExpectationTrace(times, ["n:nand1.k", "a:nand2.k"], values, conditions, jumps or [])


class TraceFileTest(unittest.TestCase):

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = self._tmp.name

    def tearDown(self):
        self._tmp.cleanup()

    def test_exact_floats(self):
        path = os.path.join(self.tmp, "trace.csv")
        write_trace(path, _trace())
        loaded = read_trace(path)

        np.testing.assert_array_equal(_trace().times, loaded.times)
        np.testing.assert_array_equal(_trace().values, loaded.values)
        self.assertEqual(["n:nand1.k", "a:nand2.k"], loaded.names)
        self.assertIsNone(loaded.conditions)

    def test_header_and_conditions(self):
        path = os.path.join(self.tmp, "trace.csv")
        write_trace(path, _trace(conditions=["SET", "SET", "HOLD"]))

        with open(path) as f:
            header = f.readline().strip()
        self.assertEqual("t,n:nand1.k_re,n:nand1.k_im,a:nand2.k_re,a:nand2.k_im,condition", header)
        self.assertEqual(["SET", "SET", "HOLD"], read_trace(path).conditions)

    def test_not_a_trace(self):
        path = os.path.join(self.tmp, "other.csv")
        with open(path, "w") as f:
            f.write("time,x\n0,1\n")
        with self.assertRaises(ModelFormatError):
            read_trace(path)

        with open(path, "w") as f:
            f.write("t,x_re,y_im\n0,1,2\n")
        with self.assertRaises(ModelFormatError):
            read_trace(path)

        with open(path, "w") as f:
            f.write("t,x_re,x_im\n0,1\n")
        with self.assertRaises(ModelFormatError):
            read_trace(path)

    def test_missing_file(self):
        with self.assertRaises(ModelFormatError):
            read_trace(os.path.join(self.tmp, "missing.csv"))


class EnsembleFilesTest(unittest.TestCase):

    def test_write_and_read(self):
        ensemble = EnsembleResult([_trace(0.0, jumps=[(0.05, 2)]), _trace(1.0), _trace(2.0, jumps=[(0.1, 1)])])

        with tempfile.TemporaryDirectory() as tmp:
            write_ensemble(tmp, ensemble)
            self.assertEqual(sorted([trajectory_file_name(k) for k in range(3)] + ["jumps.csv", "mean.csv"]),
                             sorted(os.listdir(tmp)))

            traces = read_ensemble_traces(tmp)
            mean = read_trace(os.path.join(tmp, "mean.csv"))
            with open(os.path.join(tmp, "jumps.csv")) as f:
                jumps = f.read().splitlines()

        self.assertEqual(3, len(traces))
        np.testing.assert_array_equal(_trace(2.0).values, traces[2].values)
        self.assertAlmostEqual(1 / 3 + 1.0, mean.values[0, 0].real)
        self.assertEqual(["trajectory,t,channel", "0,0.050000000000000003,2", "2,0.10000000000000001,1"], jumps)

    def test_file_names(self):
        self.assertEqual("trajectory_0007.csv", trajectory_file_name(7))

    def test_empty_directory(self):
        with tempfile.TemporaryDirectory() as tmp:
            with self.assertRaises(ModelFormatError):
                read_ensemble_traces(tmp)

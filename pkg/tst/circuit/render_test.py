import unittest

from ezqhdl.circuit.expression import ComponentRef, Permutation, series, concat, feedback
from ezqhdl.circuit.render import render_text


def ref(label: str, n: int = 1) -> ComponentRef:
    return ComponentRef(label, label, n)


class RenderTest(unittest.TestCase):

    def test_single_component(self):
        self.assertEqual([" ┌───┐", "─┤ a ├─", " └───┘"], render_text(ref("a")).split("\n"))

    def test_series_runs_left_to_right(self):
        line = render_text(series(ref("up"), ref("down"))).split("\n")[1]
        self.assertLess(line.index("up"), line.index("down"))

    def test_concatenation_stacks(self):
        lines = render_text(concat([ref("top"), ref("bottom")])).split("\n")
        top = next(i for i, line in enumerate(lines) if "top" in line)
        bottom = next(i for i, line in enumerate(lines) if "bottom" in line)
        self.assertLess(top, bottom)

    def test_permutation_and_feedback(self):
        text = render_text(feedback(series(Permutation((2, 1)), ref("k", 2)), 2, 1))
        self.assertIn("P(2,1)", text)
        self.assertIn("k", text)
        lines = text.split("\n")
        self.assertTrue(lines[0].lstrip().startswith("┌"))

    def test_crossing_wires(self):
        lines = render_text(series(concat([ref("a"), ref("b")]), Permutation((2, 1)))).split("\n")
        self.assertEqual(6, len(lines))
        self.assertIn("P(2,1)", lines[1])

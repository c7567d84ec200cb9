import glob
import os
import re
import unittest

from ezqhdl.errors import QHDLError
from ezqhdl.qhdl.parser import parse_file
from ezqhdl.qhdl.validation import validate

INVALID_DIR = os.path.join(os.path.dirname(__file__), "invalid")

# first line of every fixture: -- expect: <error class> at line <n>: <message fragment>
EXPECT = re.compile(r"^-- expect: (\w+) at line (\d+): (.*)$")


def _expectation(path: str):
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline().rstrip("\n")

    match = EXPECT.match(header)
    if match is None:
        raise ValueError(f"{path} has no expectation header")

    return match.group(1), int(match.group(2)), match.group(3)


def _load(path: str):
    design = parse_file(path)
    for entity in design.entities:
        validate(design, entity.name)


class InvalidDesignsTest(unittest.TestCase):

    def test_fixtures_present(self):
        self.assertGreaterEqual(len(glob.glob(os.path.join(INVALID_DIR, "*.qhdl"))), 10)

    def test_diagnostics(self):
        for path in sorted(glob.glob(os.path.join(INVALID_DIR, "*.qhdl"))):
            error_class, line, fragment = _expectation(path)

            with self.subTest(fixture=os.path.basename(path)):
                with self.assertRaises(QHDLError) as ctx:
                    _load(path)

                error = ctx.exception
                self.assertEqual(error_class, type(error).__name__, str(error))
                self.assertEqual(line, error.position.line, str(error))
                self.assertEqual(path, error.position.file)
                self.assertIn(fragment, error.message)

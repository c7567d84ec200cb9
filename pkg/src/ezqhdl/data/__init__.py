"""
Bundled QHDL designs and input schedules.
"""
import importlib.resources

MACH_ZEHNDER = "mach_zehnder.qhdl"
PSEUDO_NAND = "pseudo_nand.qhdl"
LATCH = "ns_nr_latch.qhdl"
LATCH_SCHEDULE = "latch_schedule.json"


def read_text(resource: str) -> str:
    return importlib.resources.files(__package__).joinpath(resource).read_text(encoding="utf-8")


def path_of(resource: str) -> str:
    """
    File system path of a bundled resource; the package must be installed unzipped.
    """
    return str(importlib.resources.files(__package__).joinpath(resource))

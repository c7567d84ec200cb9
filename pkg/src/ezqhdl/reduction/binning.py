"""
Coarse-graining of trajectory data into discrete reduced-model states.

A sample with D = <n_a> - <n_b> falls into bin floor((D - origin) / width). Only visited bins become states,
ordered by descending D, so state 1 is the highest bin (logical "on", high occupation of mode a).
"""
from __future__ import annotations

import dataclasses
import logging
import math
import typing

import numpy as np

from ezqhdl.dynamics.config import ExpectationTrace
from ezqhdl.errors import ReductionError, SimulationError

logger = logging.getLogger(__name__)

# condition assumed for traces without a condition column
DEFAULT_CONDITION = "HOLD"


@dataclasses.dataclass(frozen=True)
class BinningSpec:
    mode_a: str
    mode_b: str
    width: float = 1.0
    origin: float = 0.0

    def __post_init__(self):
        if not self.width > 0:
            raise ReductionError(f"Bin width must be positive, got {self.width}")

    def observable(self, trace: ExpectationTrace) -> np.ndarray:
        """
        D = <n_a> - <n_b> per sample.
        """
        try:
            return trace.column(f"n:{self.mode_a}").real - trace.column(f"n:{self.mode_b}").real
        except SimulationError as e:
            raise ReductionError(f"Trace lacks the occupation numbers of modes {self.mode_a} and {self.mode_b}: {e}")

    def bin_of(self, values: np.ndarray) -> np.ndarray:
        return np.floor((np.asarray(values) - self.origin) / self.width).astype(int)


@dataclasses.dataclass
class CoarseGrained:
    """
    Bin sequences per condition together with the bin table. bins[i] is the bin of (0-based) state i, in
    descending order; padded bins are never visited.
    """
    bins: typing.List[int]
    bin_sequences: typing.Dict[str, typing.List[np.ndarray]]
    padded: int = 0

    @property
    def M(self) -> int:
        return len(self.bins)

    @property
    def conditions(self) -> typing.List[str]:
        return sorted(self.bin_sequences)

    def state_table(self) -> typing.Dict[int, int]:
        """
        @return: bin -> 0-based state index
        """
        return {b: i for i, b in enumerate(self.bins)}

    def sequences(self) -> typing.Dict[str, typing.List[np.ndarray]]:
        """
        0-based state index sequences per condition.
        """
        table = self.state_table()
        lookup = np.vectorize(table.__getitem__, otypes=[int])
        return {c: [lookup(s) if len(s) else np.zeros(0, dtype=int) for s in seqs]
                for c, seqs in self.bin_sequences.items()}


def _condition_runs(trace: ExpectationTrace, bins: np.ndarray) -> typing.Iterator[typing.Tuple[str, np.ndarray]]:
    if trace.conditions is None:
        yield DEFAULT_CONDITION, bins
        return

    start = 0
    for k in range(1, len(bins) + 1):
        if k == len(bins) or trace.conditions[k] != trace.conditions[start]:
            yield trace.conditions[start], bins[start:k]
            start = k


def coarse_grain(traces: typing.Sequence[ExpectationTrace], spec: BinningSpec) -> CoarseGrained:
    """
    Splits every trace into runs of constant condition, so no transition crosses a condition boundary.
    """
    if not traces or all(len(t) == 0 for t in traces):
        raise ReductionError("No trajectory data to coarse-grain")

    sequences: typing.Dict[str, typing.List[np.ndarray]] = {}
    visited = set()
    for trace in traces:
        bins = spec.bin_of(spec.observable(trace))
        visited.update(int(b) for b in bins)
        for condition, run in _condition_runs(trace, bins):
            sequences.setdefault(condition, []).append(run)

    table = sorted(visited, reverse=True)
    logger.info(f"Coarse-grained {len(traces)} traces into {len(table)} visited bins "
                f"(bin width {spec.width}, origin {spec.origin})")
    return CoarseGrained(table, sequences)


def padded_size(m: int) -> int:
    """
    Smallest M = 4k + 2 >= max(m, 6).
    """
    return max(6, 4 * math.ceil((m - 2) / 4) + 2)


def pad_states(grained: CoarseGrained) -> CoarseGrained:
    """
    Pads the bin table to M = 4k + 2 states by alternately adding an unvisited bin above the highest and
    below the lowest bin.
    """
    bins = list(grained.bins)
    target = padded_size(len(bins))
    above = True
    while len(bins) < target:
        if above:
            bins.insert(0, bins[0] + 1)
        else:
            bins.append(bins[-1] - 1)
        above = not above

    padded = len(bins) - len(grained.bins)
    if padded:
        logger.warning(f"Padded {len(grained.bins)} visited states with {padded} unvisited states to M={len(bins)}")

    return CoarseGrained(bins, grained.bin_sequences, grained.padded + padded)

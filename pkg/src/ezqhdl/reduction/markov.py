"""
Conditional Markov chain estimation from coarse-grained state sequences.
"""
from __future__ import annotations

import csv
import dataclasses
import logging
import typing

import numpy as np

from ezqhdl.errors import ReductionError

logger = logging.getLogger(__name__)


@dataclasses.dataclass
class MarkovChainEstimate:
    """
    Lag-one transition counts per condition on M states sampled every delta_t.
    """
    counts: typing.Dict[str, np.ndarray]
    delta_t: float

    @property
    def M(self) -> int:
        return next(iter(self.counts.values())).shape[0]

    @property
    def conditions(self) -> typing.List[str]:
        return sorted(self.counts)

    def transition_matrix(self, condition: str) -> np.ndarray:
        """
        Row-normalized counts; a state never left from under this condition stays put.
        """
        counts = self.counts[condition].astype(float)
        totals = counts.sum(axis=1)
        P = np.zeros_like(counts)
        visited = totals > 0
        P[visited] = counts[visited] / totals[visited, np.newaxis]
        stuck = np.flatnonzero(~visited)
        P[stuck, stuck] = 1.0
        return P

    def transitions(self, condition: str) -> int:
        return int(self.counts[condition].sum())


def estimate_markov(sequences: typing.Mapping[str, typing.Sequence[np.ndarray]], M: int,
                    delta_t: float) -> MarkovChainEstimate:
    """
    @param sequences: 0-based state sequences per condition, each sampled at delta_t with constant condition
    """
    if not delta_t > 0:
        raise ReductionError(f"Sampling interval must be positive, got {delta_t}")

    if not sequences:
        raise ReductionError("No state sequences to estimate a Markov chain from")

    counts = {}
    for condition, seqs in sequences.items():
        n = np.zeros((M, M), dtype=np.int64)
        for seq in seqs:
            seq = np.asarray(seq, dtype=int)
            if len(seq) and (seq.min() < 0 or seq.max() >= M):
                raise ReductionError(f"State index out of range 0..{M - 1} in a {condition} sequence")
            np.add.at(n, (seq[:-1], seq[1:]), 1)
        counts[condition] = n
        logger.info(f"{condition}: {n.sum()} transitions from {len(seqs)} sequences")

    return MarkovChainEstimate(counts, delta_t)


def to_rate_matrix(estimate: MarkovChainEstimate) -> typing.Dict[str, np.ndarray]:
    """
    Q = (P - 1) / delta_t per condition.
    """
    identity = np.eye(estimate.M)
    return {c: (estimate.transition_matrix(c) - identity) / estimate.delta_t for c in estimate.conditions}


def positive_rates(Q: np.ndarray) -> typing.List[typing.Tuple[int, int, float]]:
    """
    (i, j, gamma_ij) for every strictly positive off-diagonal rate, row-major, 0-based.
    """
    return [(i, j, float(Q[i, j])) for i in range(Q.shape[0]) for j in range(Q.shape[1]) if i != j and Q[i, j] > 0]


def write_counts(path: str, counts: np.ndarray):
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        for row in counts:
            writer.writerow([int(c) for c in row])

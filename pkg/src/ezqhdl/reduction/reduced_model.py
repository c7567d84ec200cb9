"""
The reduction pipeline: traces -> coarse-grained states -> conditional Markov chains -> rate matrices ->
reduced SLH model.
"""
from __future__ import annotations

import dataclasses
import logging
import os
import typing

import numpy as np

from ezqhdl.decorators import logged_stage
from ezqhdl.dynamics.config import ExpectationTrace
from ezqhdl.errors import ReductionError
from ezqhdl.reduction.binning import BinningSpec, CoarseGrained, coarse_grain, pad_states
from ezqhdl.reduction.fitting import suggest_drive_amplitude
from ezqhdl.reduction.markov import MarkovChainEstimate, estimate_markov, to_rate_matrix, positive_rates, \
    write_counts
from ezqhdl.reduction.reduced_slh import REDUCED_MODE, jump_slh, drive_slh, compose_reduced
from ezqhdl.slh.algebra import concatenation
from ezqhdl.slh.model_io import CompiledModel
from ezqhdl.slh.triplet import SLHTriplet

logger = logging.getLogger(__name__)

DRIVE_PORTS = ["sbar", "rbar", "aux1", "aux2"]


@dataclasses.dataclass
class ReducedModel:
    binning: BinningSpec
    states: CoarseGrained
    estimate: MarkovChainEstimate
    rates: typing.Dict[str, np.ndarray]
    alpha: complex
    label: str = REDUCED_MODE

    @property
    def M(self) -> int:
        return self.states.M

    @property
    def jump(self) -> SLHTriplet:
        return jump_slh(self.rates["HOLD"], self.label)

    @property
    def drive(self) -> SLHTriplet:
        return drive_slh(self.M, self.alpha, self.label)

    def closed_model(self, sbar: complex, rbar: complex) -> SLHTriplet:
        return compose_reduced(self.jump, self.drive, sbar, rbar)

    def open_model(self) -> CompiledModel:
        """
        drive + jump, with the S-bar and R-bar inputs exposed as ports for schedules.
        """
        jump = self.jump
        triplet = concatenation(self.drive, jump) if jump.n else self.drive
        jump_ports = [f"jump{k + 1}" for k in range(jump.n)]
        return CompiledModel(triplet.expanded().check("reduced model"),
                             input_ports=DRIVE_PORTS + jump_ports,
                             output_ports=[f"{p}_out" for p in DRIVE_PORTS] + [f"{p}_out" for p in jump_ports],
                             metadata=self.metadata())

    def metadata(self) -> typing.Dict[str, typing.Any]:
        return {
            "M": self.M,
            "delta_t": self.estimate.delta_t,
            "bin_width": self.binning.width,
            "bin_origin": self.binning.origin,
            "bins": list(self.states.bins),
            "alpha": [self.alpha.real, self.alpha.imag],
            "mode": self.label,
            "conditions": {
                c: {"transitions": self.estimate.transitions(c),
                    "rates": [[i + 1, j + 1, gamma] for i, j, gamma in positive_rates(self.rates[c])]}
                for c in self.estimate.conditions
            },
        }

    def write_counts(self, directory: str):
        os.makedirs(directory, exist_ok=True)
        for c in self.estimate.conditions:
            write_counts(os.path.join(directory, f"counts_{c.lower()}.csv"), self.estimate.counts[c])


def sampling_interval(traces: typing.Sequence[ExpectationTrace]) -> float:
    """
    The common sample spacing of all traces.
    """
    spacings = set()
    for trace in traces:
        if len(trace) < 2:
            continue
        steps = np.diff(trace.times)
        if np.max(np.abs(steps - steps[0])) > 1e-9 * max(1.0, abs(steps[0])):
            raise ReductionError("Trace samples are not uniformly spaced")
        spacings.add(round(float(steps[0]), 12))

    if len(spacings) != 1:
        raise ReductionError(f"Traces need one common sample spacing, found {sorted(spacings) or 'none'}")

    return spacings.pop()


@logged_stage("reduce")
def reduce_traces(traces: typing.Sequence[ExpectationTrace], binning: BinningSpec, delta_t: float = None,
                  alpha: complex = None, label: str = REDUCED_MODE) -> ReducedModel:
    """
    @param delta_t: sample spacing, inferred from the traces if omitted
    @param alpha: drive amplitude, fitted from the SET / RESET rates if omitted
    """
    if delta_t is None:
        delta_t = sampling_interval(traces)

    states = pad_states(coarse_grain(traces, binning))
    estimate = estimate_markov(states.sequences(), states.M, delta_t)
    rates = to_rate_matrix(estimate)

    if "HOLD" not in rates:
        raise ReductionError("Reduction needs HOLD data for the jump model")

    if alpha is None:
        alpha = suggest_drive_amplitude(rates["HOLD"], rates.get("SET"), rates.get("RESET"))

    model = ReducedModel(binning, states, estimate, rates, complex(alpha), label)
    logger.info(f"Reduced model: M={model.M}, {len(positive_rates(rates['HOLD']))} jump channels, "
                f"|alpha|={abs(model.alpha):.6g}")
    return model

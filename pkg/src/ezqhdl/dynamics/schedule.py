"""
Piecewise simulation under a sequence of input conditions. Each segment feeds a block of coherent
displacements W(d_1) + ... + W(d_n) into the base model and evolves for the segment duration; the state is
carried across segments.

Schedule files are JSON lists:

    [{"condition": "SET", "duration": 0.5, "inputs": {"sbar": [0, 0], "rbar": [22.6274, 0]}}, ...]

Ports not named in "inputs" are driven by vacuum.
"""
from __future__ import annotations

import dataclasses
import json
import logging
import numbers
import typing

import numpy as np

from ezqhdl.decorators import logged_stage
from ezqhdl.dynamics import master, mcwf
from ezqhdl.dynamics.config import SimulationConfig, ExpectationTrace, TraceRecorder, Method
from ezqhdl.dynamics.state import Observable, default_observables
from ezqhdl.dynamics.system import OpenSystem
from ezqhdl.errors import SimulationError, ModelFormatError
from ezqhdl.slh.algebra import concatenation, series_product
from ezqhdl.slh.components import displace
from ezqhdl.slh.model_io import CompiledModel
from ezqhdl.slh.triplet import SLHTriplet

logger = logging.getLogger(__name__)

KNOWN_CONDITIONS = ("HOLD", "SET", "RESET")


def _amplitude(value: typing.Any, where: str) -> complex:
    if isinstance(value, numbers.Number) and not isinstance(value, bool):
        return complex(value)

    if isinstance(value, (list, tuple)) and len(value) == 2 and \
            all(isinstance(v, numbers.Number) and not isinstance(v, bool) for v in value):
        return complex(value[0], value[1])

    raise ModelFormatError(f"{where}: amplitude must be a number or a [re, im] pair, got {value!r}")


@dataclasses.dataclass(frozen=True)
class ScheduleSegment:
    condition: str
    duration: float
    inputs: typing.Dict[str, complex] = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        if self.condition not in KNOWN_CONDITIONS:
            raise SimulationError(f"Unknown schedule condition {self.condition!r}; "
                                  f"known conditions are {', '.join(KNOWN_CONDITIONS)}")

        if self.duration < 0:
            raise SimulationError(f"Negative duration {self.duration} for {self.condition} segment")

    def drive_vector(self, model: CompiledModel) -> typing.List[complex]:
        """
        @return: amplitude per input channel of the model, 0 for every port not named
        """
        drive = [0j] * model.triplet.n
        for port, amplitude in self.inputs.items():
            drive[model.channel_of(port) - 1] = amplitude
        return drive


@dataclasses.dataclass(frozen=True)
class Schedule:
    segments: typing.Tuple[ScheduleSegment, ...]

    @property
    def duration(self) -> float:
        return sum(s.duration for s in self.segments)

    @staticmethod
    def from_json(data: typing.Any) -> Schedule:
        if not isinstance(data, list):
            raise ModelFormatError("A schedule must be a JSON list of segments")

        segments = []
        for k, entry in enumerate(data):
            where = f"segment {k + 1}"
            if not isinstance(entry, dict) or "condition" not in entry or "duration" not in entry:
                raise ModelFormatError(f"{where}: expected an object with condition and duration")

            inputs = entry.get("inputs", {})
            if not isinstance(inputs, dict):
                raise ModelFormatError(f"{where}: inputs must map port names to amplitudes")

            try:
                duration = float(entry["duration"])
            except (TypeError, ValueError):
                raise ModelFormatError(f"{where}: duration must be a number, got {entry['duration']!r}")

            segments.append(ScheduleSegment(str(entry["condition"]).upper(), duration,
                                            {str(p).lower(): _amplitude(v, where) for p, v in inputs.items()}))

        return Schedule(tuple(segments))

    def to_json(self) -> typing.List[typing.Dict[str, typing.Any]]:
        return [{"condition": s.condition, "duration": s.duration,
                 "inputs": {p: [a.real, a.imag] for p, a in s.inputs.items()}} for s in self.segments]


def read_schedule(path: str) -> Schedule:
    try:
        with open(path, "r") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"{path}: not valid JSON ({e})")
    except OSError as e:
        raise ModelFormatError(f"{path}: cannot read schedule ({e.strerror})")

    return Schedule.from_json(data)


def fed_triplet(triplet: SLHTriplet, drive: typing.Sequence[complex]) -> SLHTriplet:
    """
    triplet <| (W(d_1) + ... + W(d_n))
    """
    if len(drive) != triplet.n:
        raise SimulationError(f"Drive vector of length {len(drive)} does not fit a model with {triplet.n} channels")

    return series_product(triplet, concatenation(*(displace(d) for d in drive)))


def _segment_systems(model: CompiledModel, schedule: Schedule) -> typing.List[typing.Tuple[ScheduleSegment, OpenSystem]]:
    space = model.triplet.space
    systems = {}
    result = []
    for segment in schedule.segments:
        key = tuple(segment.drive_vector(model))
        if key not in systems:
            systems[key] = OpenSystem.from_triplet(fed_triplet(model.triplet, key), space)
        result.append((segment, systems[key]))
    return result


def _check_grid(config: SimulationConfig, segment: ScheduleSegment):
    steps = config.steps_for(segment.duration)
    if abs(steps * config.dt - segment.duration) > 1e-9 * max(1.0, segment.duration):
        logger.warning(f"{segment.condition} segment of duration {segment.duration} is not a multiple of "
                       f"dt={config.dt}; simulating {steps} steps")


def _run_master(segments, initial_state: np.ndarray, config: SimulationConfig,
                observables: typing.Sequence[Observable]) -> ExpectationTrace:
    rho = master.initial_density_matrix(segments[0][1], initial_state)
    recorder = TraceRecorder(observables, config, with_conditions=True)
    recorder.sample(rho, segments[0][0].condition)

    for segment, system in segments:
        logger.info(f"{segment.condition} for {segment.duration} from t={recorder.time:.6g}")
        rho = master.evolve_master(system, rho, config.steps_for(segment.duration), recorder, segment.condition)

    return recorder.trace(final_state=rho)


def _run_trajectory(segments, initial_state: np.ndarray, config: SimulationConfig,
                    observables: typing.Sequence[Observable], rng: np.random.Generator) -> ExpectationTrace:
    state = mcwf.TrajectoryState.start(np.array(initial_state, dtype=complex), rng)
    recorder = TraceRecorder(observables, config, with_conditions=True)
    recorder.sample(state.psi, segments[0][0].condition)

    for segment, system in segments:
        state = mcwf.evolve_trajectory(system, state, config.steps_for(segment.duration), recorder, segment.condition)

    return recorder.trace(final_state=state.normalized)


@logged_stage("simulate (schedule)")
def run_input_sequence(model: typing.Union[CompiledModel, SLHTriplet], schedule: Schedule, config: SimulationConfig,
                       initial_state: np.ndarray, observables: typing.Sequence[Observable] = None
                       ) -> typing.Union[ExpectationTrace, mcwf.EnsembleResult]:
    """
    Simulates the schedule with config.method. Zero-duration segments are skipped; every sample carries the
    condition of the segment that produced it. config.t_final is ignored in favour of the schedule duration.

    @return: one trace for the master equation, an ensemble for trajectories
    """
    if isinstance(model, SLHTriplet):
        model = CompiledModel(model)

    if observables is None:
        observables = default_observables(model.triplet.expanded().space)

    segments = [(s, system) for s, system in _segment_systems(model, schedule) if config.steps_for(s.duration) > 0]
    if not segments:
        raise SimulationError("Schedule has no segment of positive duration")

    for segment, _ in segments:
        _check_grid(config, segment)

    dimension = segments[0][1].dimension
    if initial_state.shape[0] != dimension:
        raise SimulationError(f"Initial state of dimension {initial_state.shape[0]} does not fit the model "
                              f"dimension {dimension}")

    logger.info(f"Running schedule of {len(segments)} segments ({schedule.duration} time units) with "
                f"{config.method.value}")

    if config.method == Method.MASTER:
        return _run_master(segments, initial_state, config, observables)

    return mcwf.run_ensemble(lambda k: _run_trajectory(segments, initial_state, config, observables,
                                                       mcwf.trajectory_rng(config.seed, k)), config)

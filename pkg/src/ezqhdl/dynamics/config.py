from __future__ import annotations

import dataclasses
import enum
import logging
import typing

import numpy as np

from ezqhdl.errors import SimulationError
from ezqhdl.dynamics.state import Observable

logger = logging.getLogger(__name__)


class Method(enum.Enum):
    MASTER = "master"
    MCWF = "mcwf"


@dataclasses.dataclass(frozen=True)
class SimulationConfig:
    t_final: float
    dt: float
    sample_interval: typing.Optional[float] = None
    method: Method = Method.MASTER
    trajectories: int = 1
    seed: int = 0
    workers: typing.Optional[int] = None

    def __post_init__(self):
        if self.sample_interval is None:
            object.__setattr__(self, "sample_interval", self.dt)

        if not 0 < self.dt <= self.sample_interval <= self.t_final:
            raise SimulationError(f"Need 0 < dt <= sample interval <= t_final, got dt={self.dt}, "
                                  f"sample interval={self.sample_interval}, t_final={self.t_final}")

        if self.trajectories < 1:
            raise SimulationError(f"Need at least one trajectory, got {self.trajectories}")

    @property
    def steps_per_sample(self) -> int:
        return max(1, int(round(self.sample_interval / self.dt)))

    def steps_for(self, duration: float) -> int:
        return int(round(duration / self.dt))

    @property
    def n_steps(self) -> int:
        return self.steps_for(self.t_final)

    def with_time(self, t_final: float) -> SimulationConfig:
        return dataclasses.replace(self, t_final=t_final)


@dataclasses.dataclass
class ExpectationTrace:
    """
    Observable expectations on a uniform time grid. values[k, j] is observable j at times[k].
    """
    times: np.ndarray
    names: typing.List[str]
    values: np.ndarray
    conditions: typing.Optional[typing.List[str]] = None
    jumps: typing.List[typing.Tuple[float, int]] = dataclasses.field(default_factory=list)
    final_state: typing.Optional[np.ndarray] = None

    def column(self, name: str) -> np.ndarray:
        if name not in self.names:
            raise SimulationError(f"Trace has no observable {name} (available: {', '.join(self.names)})")

        return self.values[:, self.names.index(name)]

    def __len__(self):
        return len(self.times)


class TraceRecorder:
    """
    Collects samples every steps_per_sample integration steps, counted over the whole run so that
    piecewise simulations share one uniform grid.
    """

    def __init__(self, observables: typing.Sequence[Observable], config: SimulationConfig, with_conditions: bool):
        self.observables = list(observables)
        self.config = config
        self.with_conditions = with_conditions
        self.step = 0
        self._times: typing.List[float] = []
        self._values: typing.List[typing.List[complex]] = []
        self._conditions: typing.List[str] = []
        self.jumps: typing.List[typing.Tuple[float, int]] = []

    @property
    def time(self) -> float:
        return self.step * self.config.dt

    def sample(self, state: np.ndarray, condition: typing.Optional[str] = None):
        self._times.append(self.time)
        self._values.append([o.expectation(state) for o in self.observables])
        self._conditions.append(condition or "")

    def advance(self, state_provider: typing.Callable[[], np.ndarray], condition: typing.Optional[str] = None):
        """
        Counts one integration step; samples if the step lands on the output grid.
        """
        self.step += 1
        if self.step % self.config.steps_per_sample == 0:
            self.sample(state_provider(), condition)

    def trace(self, final_state: np.ndarray = None) -> ExpectationTrace:
        values = np.array(self._values, dtype=complex).reshape(len(self._times), len(self.observables))
        return ExpectationTrace(np.array(self._times), [o.name for o in self.observables], values,
                                list(self._conditions) if self.with_conditions else None,
                                list(self.jumps), final_state)

"""
Monte-Carlo wavefunction (quantum jump) trajectories.

The unnormalized state evolves under K = H - i/2 sum_j L_j^dag L_j. A jump happens when its squared norm falls
below a uniform random threshold; the jump time is located by bisection to dt/100, channel j is picked with
probability proportional to ||L_j psi||^2, and a new threshold is drawn after the jump.
"""
from __future__ import annotations

import concurrent.futures
import dataclasses
import logging
import typing

import numpy as np

from ezqhdl.decorators import logged_stage
from ezqhdl.dynamics.config import SimulationConfig, ExpectationTrace, TraceRecorder
from ezqhdl.dynamics.state import Observable, default_observables
from ezqhdl.dynamics.system import OpenSystem
from ezqhdl.errors import SimulationError, SpaceMismatchError
from ezqhdl.slh.triplet import SLHTriplet

logger = logging.getLogger(__name__)

BISECTION_DIVISIONS = 100


def trajectory_rng(seed: int, trajectory: int) -> np.random.Generator:
    """
    Independent stream per trajectory, so results do not depend on scheduling.
    """
    return np.random.default_rng(np.random.SeedSequence([seed, trajectory]))


def _derivative(system: OpenSystem, psi: np.ndarray) -> np.ndarray:
    return -1j * (system.K @ psi)


def rk4_step(system: OpenSystem, psi: np.ndarray, dt: float) -> np.ndarray:
    k1 = _derivative(system, psi)
    k2 = _derivative(system, psi + 0.5 * dt * k1)
    k3 = _derivative(system, psi + 0.5 * dt * k2)
    k4 = _derivative(system, psi + dt * k3)
    return psi + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def _norm2(psi: np.ndarray) -> float:
    return float(np.vdot(psi, psi).real)


@dataclasses.dataclass
class TrajectoryState:
    """
    Unnormalized state and the current jump threshold; carried across schedule segments.
    """
    psi: np.ndarray
    threshold: float
    rng: np.random.Generator

    @staticmethod
    def start(psi: np.ndarray, rng: np.random.Generator) -> TrajectoryState:
        return TrajectoryState(psi / np.linalg.norm(psi), rng.random(), rng)

    @property
    def normalized(self) -> np.ndarray:
        return self.psi / np.sqrt(_norm2(self.psi))


def _locate_jump(system: OpenSystem, psi: np.ndarray, threshold: float, interval: float, resolution: float) -> float:
    """
    Smallest time (to the given resolution) after which the squared norm has fallen below the threshold.
    """
    lo, hi = 0.0, interval
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if _norm2(rk4_step(system, psi, mid)) > threshold:
            lo = mid
        else:
            hi = mid

    return hi


def _jump(system: OpenSystem, state: TrajectoryState, t: float, jumps: typing.List[typing.Tuple[float, int]]):
    rates = system.jump_rates(state.psi)
    total = rates.sum()
    if not total > 0:
        raise SimulationError(f"All jump weights vanish at t={t:.6g} (norm {_norm2(state.psi):.3e}); "
                              f"numerical underflow, reduce the time step")

    j = int(np.searchsorted(np.cumsum(rates), state.rng.random() * total, side="right"))
    j = min(j, len(rates) - 1)

    psi = system.L[j] @ state.psi
    state.psi = psi / np.sqrt(_norm2(psi))
    state.threshold = state.rng.random()

    channel = system.channels[j]
    jumps.append((t, channel))
    logger.debug(f"Jump into channel {channel} at t={t:.6g}")


def _step(system: OpenSystem, state: TrajectoryState, t: float, dt: float,
          jumps: typing.List[typing.Tuple[float, int]]):
    if not system.has_jumps:
        psi = rk4_step(system, state.psi, dt)
        state.psi = psi / np.sqrt(_norm2(psi))
        return

    resolution = dt / BISECTION_DIVISIONS
    remaining = dt
    while True:
        candidate = rk4_step(system, state.psi, remaining)
        if _norm2(candidate) > state.threshold:
            state.psi = candidate
            return

        tau = _locate_jump(system, state.psi, state.threshold, remaining, resolution)
        state.psi = rk4_step(system, state.psi, tau)
        t += tau
        remaining -= tau
        _jump(system, state, t, jumps)

        if remaining <= resolution * 1e-6:
            return


def evolve_trajectory(system: OpenSystem, state: TrajectoryState, n_steps: int, recorder: TraceRecorder,
                      condition: str = None) -> TrajectoryState:
    dt = recorder.config.dt
    for _ in range(n_steps):
        _step(system, state, recorder.time, dt, recorder.jumps)
        recorder.advance(lambda: state.psi, condition)

    return state


def _as_system(system: typing.Union[OpenSystem, SLHTriplet]) -> OpenSystem:
    return OpenSystem.from_triplet(system) if isinstance(system, SLHTriplet) else system


def mcwf_trajectory(system: typing.Union[OpenSystem, SLHTriplet], initial_state: np.ndarray,
                    config: SimulationConfig, rng: np.random.Generator,
                    observables: typing.Sequence[Observable] = None) -> ExpectationTrace:
    """
    One trajectory; deterministic given the rng stream. Jump records are (time, 1-based channel).
    """
    system = _as_system(system)
    if initial_state.shape != (system.dimension,):
        raise SpaceMismatchError(f"Initial state of shape {initial_state.shape} does not fit {system.space}")

    if observables is None:
        observables = default_observables(system.space)

    state = TrajectoryState.start(np.array(initial_state, dtype=complex), rng)
    recorder = TraceRecorder(observables, config, with_conditions=False)
    recorder.sample(state.psi)

    state = evolve_trajectory(system, state, config.n_steps, recorder)
    return recorder.trace(final_state=state.normalized)


@dataclasses.dataclass
class EnsembleResult:
    traces: typing.List[ExpectationTrace]

    @property
    def times(self) -> np.ndarray:
        return self.traces[0].times

    @property
    def names(self) -> typing.List[str]:
        return self.traces[0].names

    @property
    def mean(self) -> np.ndarray:
        return np.mean([t.values for t in self.traces], axis=0)

    @property
    def standard_error(self) -> np.ndarray:
        """
        Standard error of the mean, separately for real and imaginary parts.
        """
        values = np.array([t.values for t in self.traces])
        if len(self.traces) < 2:
            return np.zeros(values.shape[1:], dtype=complex)

        n = len(self.traces)
        return (np.std(values.real, axis=0, ddof=1) + 1j * np.std(values.imag, axis=0, ddof=1)) / np.sqrt(n)

    def mean_trace(self) -> ExpectationTrace:
        return ExpectationTrace(self.times, self.names, self.mean, self.traces[0].conditions)

    @property
    def jumps(self) -> typing.List[typing.Tuple[int, float, int]]:
        return [(k, t, channel) for k, trace in enumerate(self.traces) for t, channel in trace.jumps]


def run_ensemble(trajectory: typing.Callable[[int], ExpectationTrace], config: SimulationConfig) -> EnsembleResult:
    """
    Runs trajectory(k) for k = 0..config.trajectories-1 in a thread pool, results in trajectory order.
    """
    logger.info(f"Running {config.trajectories} trajectories (seed {config.seed})")
    with concurrent.futures.ThreadPoolExecutor(max_workers=config.workers) as executor:
        traces = list(executor.map(trajectory, range(config.trajectories)))

    jumps = sum(len(t.jumps) for t in traces)
    logger.info(f"Finished {len(traces)} trajectories with {jumps} jumps in total")
    return EnsembleResult(traces)


@logged_stage("simulate (mcwf)")
def run_trajectories(system: typing.Union[OpenSystem, SLHTriplet], initial_state: np.ndarray,
                     config: SimulationConfig, observables: typing.Sequence[Observable] = None) -> EnsembleResult:
    system = _as_system(system)
    if observables is None:
        observables = default_observables(system.space)

    return run_ensemble(lambda k: mcwf_trajectory(system, initial_state, config, trajectory_rng(config.seed, k),
                                                  observables), config)

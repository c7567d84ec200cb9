"""
Lindblad master equation d rho/dt = -i[H, rho] + sum_j (L_j rho L_j^dag - 1/2 {L_j^dag L_j, rho}),
written as -i(K rho - rho K^dag) + sum_j L_j rho L_j^dag with K = H - i/2 sum_j L_j^dag L_j and integrated
with fixed-step fourth order Runge-Kutta.
"""
from __future__ import annotations

import logging
import typing

import numpy as np

from ezqhdl.decorators import logged_stage
from ezqhdl.dynamics.config import SimulationConfig, ExpectationTrace, TraceRecorder
from ezqhdl.dynamics.state import Observable, default_observables, density_matrix
from ezqhdl.dynamics.system import OpenSystem
from ezqhdl.errors import SimulationError, SpaceMismatchError
from ezqhdl.slh.triplet import SLHTriplet

logger = logging.getLogger(__name__)

TRACE_DRIFT_LIMIT = 1e-4


def liouvillian_apply(system: typing.Union[OpenSystem, SLHTriplet], rho: np.ndarray) -> np.ndarray:
    if isinstance(system, SLHTriplet):
        system = OpenSystem.from_triplet(system)

    if rho.shape != (system.dimension, system.dimension):
        raise SpaceMismatchError(f"Density matrix of shape {rho.shape} does not fit {system.space}")

    rho_dag = rho.conj().T
    # rho K^dag = (K rho^dag)^dag
    result = -1j * (system.K @ rho - (system.K @ rho_dag).conj().T)
    for l_j in system.L:
        result += l_j @ (l_j @ rho_dag).conj().T

    return result


def rk4_step(system: OpenSystem, rho: np.ndarray, dt: float) -> np.ndarray:
    k1 = liouvillian_apply(system, rho)
    k2 = liouvillian_apply(system, rho + 0.5 * dt * k1)
    k3 = liouvillian_apply(system, rho + 0.5 * dt * k2)
    k4 = liouvillian_apply(system, rho + dt * k3)
    return rho + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def evolve_master(system: OpenSystem, rho: np.ndarray, n_steps: int, recorder: TraceRecorder,
                  condition: str = None) -> np.ndarray:
    dt = recorder.config.dt
    for _ in range(n_steps):
        rho = rk4_step(system, rho, dt)

        drift = abs(np.trace(rho).real - 1)
        if drift > TRACE_DRIFT_LIMIT:
            raise SimulationError(f"Trace of the density matrix drifted by {drift:.3e} at t={recorder.time + dt:.6g}; "
                                  f"reduce the time step (dt={dt})")

        recorder.advance(lambda: rho, condition)

    return rho


def initial_density_matrix(system: OpenSystem, state: np.ndarray) -> np.ndarray:
    rho = density_matrix(state) if state.ndim == 1 else np.array(state, dtype=complex)
    if rho.shape != (system.dimension, system.dimension):
        raise SpaceMismatchError(f"Initial state of shape {state.shape} does not fit {system.space}")
    return rho


@logged_stage("simulate (master)")
def integrate_master(system: typing.Union[OpenSystem, SLHTriplet], initial_state: np.ndarray,
                     config: SimulationConfig,
                     observables: typing.Sequence[Observable] = None) -> ExpectationTrace:
    """
    @param initial_state: state vector or density matrix on the model space
    @return: trace sampled every config.sample_interval, with the final density matrix attached
    """
    if isinstance(system, SLHTriplet):
        system = OpenSystem.from_triplet(system)

    if observables is None:
        observables = default_observables(system.space)

    rho = initial_density_matrix(system, initial_state)
    recorder = TraceRecorder(observables, config, with_conditions=False)
    recorder.sample(rho)

    logger.info(f"Integrating master equation: dimension {system.dimension}, {config.n_steps} steps of {config.dt}")
    rho = evolve_master(system, rho, config.n_steps, recorder)

    return recorder.trace(final_state=rho)

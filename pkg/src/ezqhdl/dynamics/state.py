"""
Initial states and observables on a model's Hilbert space.
"""
from __future__ import annotations

import dataclasses
import logging
import typing

import numpy as np
import scipy.sparse

from ezqhdl.errors import SimulationError
from ezqhdl.slh.hilbert_space import HilbertSpace
from ezqhdl.slh.operator import Operator

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-9
TRACE_TOLERANCE = 1e-6
EIGENVALUE_TOLERANCE = 1e-8


def fock_state(space: HilbertSpace, occupations: typing.Mapping[str, int] = None) -> np.ndarray:
    """
    Product of Fock states, vacuum on every mode not named.
    """
    occupations = {k.lower(): v for k, v in (occupations or {}).items()}
    unknown = sorted(set(occupations) - set(space.labels))
    if unknown:
        raise SimulationError(f"Unknown mode {unknown[0]}; the model has modes {', '.join(space.labels) or 'none'}")

    index = 0
    for label, dim in space.modes:
        n = occupations.get(label, 0)
        if not 0 <= n < dim:
            raise SimulationError(f"Fock state |{n}> does not fit mode {label} of dimension {dim}")
        index = index * dim + n

    return basis_state(space, index)


def basis_state(space: HilbertSpace, index: int) -> np.ndarray:
    if not 0 <= index < space.dimension:
        raise SimulationError(f"Basis state {index} out of range for dimension {space.dimension}")

    psi = np.zeros(space.dimension, dtype=complex)
    psi[index] = 1.0
    return psi


def parse_initial_state(space: HilbertSpace, specs: typing.Sequence[str]) -> np.ndarray:
    """
    @param specs: "label=n" Fock occupations, or a single bare basis index (0-based) for one-mode spaces
    """
    if len(specs) == 1 and specs[0].strip().isdigit():
        if len(space.modes) != 1:
            raise SimulationError("A bare basis index needs a single-mode model; use label=n instead")
        return basis_state(space, int(specs[0]))

    occupations = {}
    for spec in specs:
        label, sep, value = spec.partition("=")
        if not sep or not value.strip().isdigit():
            raise SimulationError(f"Malformed initial state {spec!r}, expected label=n")
        occupations[label.strip()] = int(value)

    return fock_state(space, occupations)


def density_matrix(psi: np.ndarray) -> np.ndarray:
    return np.outer(psi, psi.conj())


def check_state_vector(psi: np.ndarray):
    norm = np.linalg.norm(psi)
    if abs(norm - 1) > NORM_TOLERANCE:
        raise SimulationError(f"State vector norm {norm:.12f} differs from 1")


def check_density_matrix(rho: np.ndarray):
    trace = np.trace(rho).real
    if abs(trace - 1) > TRACE_TOLERANCE:
        raise SimulationError(f"Density matrix trace {trace:.9f} differs from 1")

    if np.max(np.abs(rho - rho.conj().T)) > EIGENVALUE_TOLERANCE:
        raise SimulationError("Density matrix is not Hermitian")

    smallest = np.min(np.linalg.eigvalsh(rho))
    if smallest < -EIGENVALUE_TOLERANCE:
        raise SimulationError(f"Density matrix has negative eigenvalue {smallest:.3e}")


@dataclasses.dataclass(frozen=True)
class Observable:
    name: str
    matrix: scipy.sparse.csr_matrix

    def expectation(self, state: np.ndarray) -> complex:
        """
        <A> for a (not necessarily normalized) state vector, or tr(A rho) for a density matrix.
        """
        if state.ndim == 1:
            return complex(np.vdot(state, self.matrix @ state) / np.vdot(state, state).real)

        return complex((self.matrix @ state).diagonal().sum())


def parse_observable(name: str, space: HilbertSpace) -> Observable:
    """
    n:<label> number operator, a:<label> annihilation operator, p:<i> projector on basis state i of a
    single-mode space.
    """
    kind, sep, arg = name.partition(":")
    kind = kind.strip().lower()
    arg = arg.strip().lower()

    if not sep or kind not in ("n", "a", "p"):
        raise SimulationError(f"Unknown observable {name!r}; expected n:<mode>, a:<mode> or p:<index>")

    if kind == "p":
        if len(space.modes) != 1 or not arg.isdigit():
            raise SimulationError(f"Projector observable {name!r} needs a single-mode model and a basis index")
        label, dim = space.modes[0]
        operator = Operator.transition(label, dim, int(arg), int(arg))
    else:
        if arg not in space.labels:
            raise SimulationError(f"Observable {name!r} refers to unknown mode {arg}; "
                                  f"the model has modes {', '.join(space.labels) or 'none'}")
        dim = space.dim_of(arg)
        operator = Operator.number(arg, dim) if kind == "n" else Operator.annihilation(arg, dim)

    return Observable(f"{kind}:{arg}", operator.embed(space).matrix)


def default_observables(space: HilbertSpace) -> typing.List[Observable]:
    return [parse_observable(f"n:{label}", space) for label in space.labels]


def parse_observables(names: typing.Optional[typing.Sequence[str]], space: HilbertSpace) -> typing.List[Observable]:
    if not names:
        return default_observables(space)

    return [parse_observable(n, space) for n in names]

from __future__ import annotations

import logging
import typing

import numpy as np
import scipy.sparse

from ezqhdl.slh.hilbert_space import HilbertSpace
from ezqhdl.slh.triplet import SLHTriplet

logger = logging.getLogger(__name__)


class OpenSystem:
    """
    The parts of an SLH model entering the master equation, as sparse matrices on the full model space:
    H, the jump operators L_j and K = H - i/2 sum_j L_j^dag L_j. S does not enter the dynamics.
    """

    def __init__(self, space: HilbertSpace, H: scipy.sparse.csr_matrix, L: typing.List[scipy.sparse.csr_matrix]):
        self.space = space
        self.H = H
        # zero coupling operators never fire; channel numbers are kept for jump records
        self.channels = [j + 1 for j, l_j in enumerate(L) if l_j.count_nonzero() > 0]
        self.L = [L[j - 1] for j in self.channels]

        decay = scipy.sparse.csr_matrix(H.shape, dtype=complex)
        for l_j in self.L:
            decay = decay + l_j.conj().T @ l_j

        self.K = (H - 0.5j * decay).tocsr()
        self.K_dag = self.K.conj().T.tocsr()

    @staticmethod
    def from_triplet(triplet: SLHTriplet, space: HilbertSpace = None) -> OpenSystem:
        expanded = triplet.expanded(space)
        system = OpenSystem(expanded.space, expanded.H.matrix, [l.matrix for l in expanded.L])
        logger.info(f"Open system on {system.space} (dimension {system.dimension}) with "
                    f"{len(system.L)} jump operators")
        return system

    @property
    def dimension(self) -> int:
        return self.H.shape[0]

    @property
    def has_jumps(self) -> bool:
        return len(self.L) > 0

    def jump_rates(self, psi: np.ndarray) -> np.ndarray:
        """
        ||L_j psi||^2 for every firing channel.
        """
        return np.array([np.vdot(v, v).real for v in (l_j @ psi for l_j in self.L)])

"""
SLH models on the reduced state space {|1>, ..., |M>} (a single mode whose basis states are the
coarse-grained states).

jump model:   S = 1_K, L_k = sqrt(gamma_ij) |j><i| for every positive rate, H = 0
drive model:  four channels (S-bar, R-bar, S drift, R drift) built from the drift operators; fed with
              W(S-bar) + W(R-bar) + 1_2 its coupling vector vanishes exactly for S-bar = R-bar = alpha
output model: state-dependent two-channel scattering of a bias field
"""
from __future__ import annotations

import cmath
import logging
import math
import typing

import numpy as np
import scipy.sparse

from ezqhdl.errors import ReductionError
from ezqhdl.reduction.markov import positive_rates
from ezqhdl.slh.algebra import concatenation, identity_system, series_product
from ezqhdl.slh.components import displace
from ezqhdl.slh.hilbert_space import HilbertSpace
from ezqhdl.slh.operator import Operator
from ezqhdl.slh.triplet import SLHTriplet

logger = logging.getLogger(__name__)

REDUCED_MODE = "state"


def check_state_count(M: int) -> int:
    """
    @return: k with M = 4k + 2
    """
    if M < 6 or (M - 2) % 4 != 0:
        raise ReductionError(f"The reduced drive needs M = 4k + 2 states with k >= 1, got M={M}")
    return (M - 2) // 4


def _transitions(M: int, pairs: typing.Iterable[typing.Tuple[int, int]], label: str) -> Operator:
    """
    Sum of |target><source| over 1-based (target, source) pairs.
    """
    targets, sources = zip(*pairs)
    matrix = scipy.sparse.coo_matrix((np.ones(len(targets)), (np.array(targets) - 1, np.array(sources) - 1)),
                                     shape=(M, M))
    return Operator(HilbertSpace.mode(label, M), matrix)


def set_drift_pairs(M: int) -> typing.List[typing.Tuple[int, int]]:
    """
    1-based (target, source) pairs of Sigma_S: |M-4-2m><M-1-2m|, moving population towards low indices.
    """
    return [(M - 4 - 2 * m, M - 1 - 2 * m) for m in range(check_state_count(M))]


def reset_drift_pairs(M: int) -> typing.List[typing.Tuple[int, int]]:
    """
    1-based (target, source) pairs of Sigma_R: |5+2m><2+2m|, moving population towards high indices.
    """
    return [(5 + 2 * m, 2 + 2 * m) for m in range(check_state_count(M))]


def drift_operators(M: int, label: str = REDUCED_MODE) -> typing.Tuple[Operator, Operator]:
    return _transitions(M, set_drift_pairs(M), label), _transitions(M, reset_drift_pairs(M), label)


def jump_slh(Q: np.ndarray, label: str = REDUCED_MODE) -> SLHTriplet:
    """
    One channel per strictly positive off-diagonal rate, row-major. No positive rate gives the trivial model.
    """
    M = Q.shape[0]
    rates = positive_rates(Q)
    if not rates:
        return SLHTriplet.trivial()

    L = [math.sqrt(gamma) * Operator.transition(label, M, j, i) for i, j, gamma in rates]
    K = len(L)
    logger.info(f"Jump model with {K} channels on {M} states")
    return SLHTriplet([[1 if r == c else 0 for c in range(K)] for r in range(K)], L, 0)


def drive_slh(M: int, alpha: complex, label: str = REDUCED_MODE) -> SLHTriplet:
    sigma_s, sigma_r = drift_operators(M, label)
    one = Operator.identity(HilbertSpace.mode(label, M))

    p_s = sigma_s.dag() * sigma_s
    p_r = sigma_r.dag() * sigma_r
    q_s = sigma_s * sigma_s.dag()
    q_r = sigma_r * sigma_r.dag()

    # 1_4 minus the drift block matrix
    S = [[one - p_s, 0, sigma_s.dag(), 0],
         [0, one - p_r, 0, sigma_r.dag()],
         [sigma_s, 0, one - q_s, 0],
         [0, sigma_r, 0, one - q_r]]
    L = [-alpha * (one - p_s), -alpha * (one - p_r), -alpha * sigma_s, -alpha * sigma_r]
    return SLHTriplet(S, L, 0)


def compose_reduced(jump: SLHTriplet, drive: SLHTriplet, sbar: complex, rbar: complex) -> SLHTriplet:
    """
    (drive <| (W(sbar) + W(rbar) + 1_2)) + jump
    """
    if drive.n != 4:
        raise ReductionError(f"The reduced drive has four channels, got {drive.n}")

    fed = series_product(drive, concatenation(displace(sbar), displace(rbar), identity_system(2)))
    return concatenation(fed, jump) if jump.n else fed


def output_slh(parameters: typing.Sequence[typing.Tuple[float, float, float]], beta: complex,
               label: str = REDUCED_MODE) -> SLHTriplet:
    """
    @param parameters: (theta_i, phi_1i, phi_2i) per reduced state
    @param beta: bias amplitude entering the first channel
    """
    M = len(parameters)
    if M < 1:
        raise ReductionError("Output model needs parameters for at least one state")

    blocks = np.zeros((2, 2, M), dtype=complex)
    for i, (theta, phi_1, phi_2) in enumerate(parameters):
        e1, e2 = cmath.exp(1j * phi_1), cmath.exp(1j * phi_2)
        blocks[:, :, i] = [[e1 * math.cos(theta), -e1 * math.sin(theta)],
                           [e2 * math.sin(theta), e2 * math.cos(theta)]]

    space = HilbertSpace.mode(label, M)
    S = [[Operator(space, scipy.sparse.diags(blocks[r, c])) for c in range(2)] for r in range(2)]
    L = [S[0][0] * beta, S[1][0] * beta]
    return SLHTriplet(S, L, 0)

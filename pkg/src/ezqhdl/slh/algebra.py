"""
The three composition rules of the circuit algebra (concatenation, series product, feedback) and the
static identity / permutation systems.
"""
import logging
import typing
import warnings

import numpy as np
import scipy.linalg

from ezqhdl import permutations
from ezqhdl.errors import AlgebraError, FeedbackError
from ezqhdl.slh.operator import Operator
from ezqhdl.slh.triplet import SLHTriplet, operator_dot

logger = logging.getLogger(__name__)

SINGULAR_PIVOT_TOLERANCE = 1e-10


def identity_system(n: int) -> SLHTriplet:
    if n < 1:
        raise AlgebraError(f"Identity system needs at least one channel, got {n}")

    return SLHTriplet([[1 if i == j else 0 for j in range(n)] for i in range(n)], [0] * n, 0)


def permutation_system(sigma: typing.Sequence[int]) -> SLHTriplet:
    """
    (P_sigma, 0, 0) with (P_sigma)_{k,l} = delta_{k, sigma(l)}, 1-based.
    """
    if not permutations.is_permutation(sigma):
        raise AlgebraError(f"{tuple(sigma)} is not a bijective image tuple")

    n = len(sigma)
    return SLHTriplet([[1 if k + 1 == sigma[l] else 0 for l in range(n)] for k in range(n)], [0] * n, 0)


def concatenation(*triplets: SLHTriplet) -> SLHTriplet:
    """
    Block-diagonal S, stacked L, summed H.
    """
    n = sum(t.n for t in triplets)
    S = [[Operator.zero()] * n for _ in range(n)]
    L = []
    H = Operator.zero()

    offset = 0
    for t in triplets:
        for i in range(t.n):
            for j in range(t.n):
                S[offset + i][offset + j] = t.S[i][j]
        L.extend(t.L)
        H = H + t.H
        offset += t.n

    return SLHTriplet(S, L, H)


def series_product(q2: SLHTriplet, q1: SLHTriplet) -> SLHTriplet:
    """
    q2 <| q1: every output of q1 feeds the corresponding input of q2.
    (S2 S1, L2 + S2 L1, H1 + H2 + Im{L2^dag S2 L1})
    """
    if q1.n != q2.n:
        raise AlgebraError(f"Series product needs equal channel counts, got {q2.n} and {q1.n}")

    n = q1.n
    S = [[operator_dot(q2.S[i], [q1.S[m][j] for m in range(n)]) for j in range(n)] for i in range(n)]
    S2_L1 = [operator_dot(q2.S[i], q1.L) for i in range(n)]
    L = [q2.L[i] + S2_L1[i] for i in range(n)]
    cross = operator_dot([l.dag() for l in q2.L], S2_L1)

    return SLHTriplet(S, L, q1.H + q2.H + cross.imag_part())


def _invert(op: Operator) -> Operator:
    dense = op.to_dense()
    with warnings.catch_warnings():
        # singular factors are reported through the pivot check below
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(dense, check_finite=False)
    smallest_pivot = float(np.min(np.abs(np.diag(lu))))

    if smallest_pivot < SINGULAR_PIVOT_TOLERANCE:
        raise FeedbackError(f"Feedback loop is not well posed: 1 - S_kl is singular "
                            f"(smallest pivot {smallest_pivot:.3e})")

    return Operator(op.space, scipy.linalg.lu_solve((lu, piv), np.eye(dense.shape[0]), check_finite=False))


def feedback_reduce(q: SLHTriplet, k: int, l: int) -> SLHTriplet:
    """
    Feeds output channel k back into input channel l (1-based), eliminating one channel.

    @param q: triplet with at least two channels
    @param k: output channel index
    @param l: input channel index
    @return: the reduced triplet with n - 1 channels
    """
    n = q.n
    if n < 2:
        raise AlgebraError(f"Feedback needs at least two channels, got {n}")

    if not (1 <= k <= n and 1 <= l <= n):
        raise AlgebraError(f"Feedback indices ({k}, {l}) out of range for {n} channels")

    k0, l0 = k - 1, l - 1
    logger.debug(f"Feedback reduction {k}->{l} on {n} channels")

    inverse = _invert(1 - q.S[k0][l0])

    rows = [i for i in range(n) if i != k0]
    cols = [j for j in range(n) if j != l0]

    # S_il (1 - S_kl)^-1, shared by the S and L updates
    loop_gain = {i: (Operator.zero() if q.S[i][l0].is_zero() else q.S[i][l0] * inverse) for i in rows}

    S = [[q.S[i][j] if loop_gain[i].is_zero() or q.S[k0][j].is_zero()
          else q.S[i][j] + loop_gain[i] * q.S[k0][j]
          for j in cols] for i in rows]

    L = [q.L[i] if loop_gain[i].is_zero() or q.L[k0].is_zero()
         else q.L[i] + loop_gain[i] * q.L[k0]
         for i in rows]

    coupling = operator_dot([l_j.dag() for l_j in q.L], [q.S[j][l0] for j in range(n)])
    H = q.H
    if not coupling.is_zero() and not q.L[k0].is_zero():
        H = H + (coupling * inverse * q.L[k0]).imag_part()

    return SLHTriplet(S, L, H)


def decompose(q: SLHTriplet, block_sizes: typing.Sequence[int], hamiltonian_block: int = 0) -> typing.List[SLHTriplet]:
    """
    Splits a triplet whose S is block diagonal into concatenation factors, q = q_0 [+] q_1 [+] ...
    The Hamiltonian is assigned to one block of the caller's choosing.

    @param block_sizes: channel count of each factor, summing to q.n
    @param hamiltonian_block: 0-based index of the factor receiving H
    """
    if sum(block_sizes) != q.n or any(size < 1 for size in block_sizes):
        raise AlgebraError(f"Block sizes {list(block_sizes)} do not partition {q.n} channels")

    if not 0 <= hamiltonian_block < len(block_sizes):
        raise AlgebraError(f"Hamiltonian block {hamiltonian_block} out of range")

    starts = np.concatenate([[0], np.cumsum(block_sizes)]).astype(int)
    block_of = np.repeat(np.arange(len(block_sizes)), block_sizes)

    for i in range(q.n):
        for j in range(q.n):
            if block_of[i] != block_of[j] and not q.S[i][j].is_zero():
                raise AlgebraError(f"S is not block diagonal: entry ({i + 1}, {j + 1}) couples two blocks")

    result = []
    for b, size in enumerate(block_sizes):
        start = starts[b]
        indices = range(start, start + size)
        result.append(SLHTriplet([[q.S[i][j] for j in indices] for i in indices],
                                 [q.L[i] for i in indices],
                                 q.H if b == hamiltonian_block else 0))

    return result

from __future__ import annotations

import logging
import typing

from ezqhdl.errors import AlgebraError
from ezqhdl.slh.hilbert_space import HilbertSpace
from ezqhdl.slh.operator import Operator, OperatorLike

logger = logging.getLogger(__name__)

WARN_TOLERANCE = 1e-10
ERROR_TOLERANCE = 1e-6


class SLHTriplet:
    """
    (S, L, H) parameters of an open quantum input-output component with n channels.

    S is an n x n matrix of operators, L an n-vector of operators and H a Hermitian operator. Entries may
    live on different (sub)spaces; space is the union of all of them.
    """

    def __init__(self,
                 S: typing.Sequence[typing.Sequence[OperatorLike]],
                 L: typing.Sequence[OperatorLike],
                 H: OperatorLike = 0):
        n = len(L)
        if len(S) != n or any(len(row) != n for row in S):
            raise AlgebraError(f"Scattering matrix must be {n}x{n} to match a coupling vector of length {n}")

        self._S: typing.Tuple[typing.Tuple[Operator, ...], ...] = \
            tuple(tuple(Operator.coerce(s) for s in row) for row in S)
        self._L: typing.Tuple[Operator, ...] = tuple(Operator.coerce(l) for l in L)
        self._H: Operator = Operator.coerce(H)

        space = self._H.space
        for op in self._L:
            space = space.union(op.space)
        for row in self._S:
            for op in row:
                space = space.union(op.space)

        self._space = space

    @staticmethod
    def trivial() -> SLHTriplet:
        """
        The zero-channel system, neutral element of concatenation.
        """
        return SLHTriplet([], [], 0)

    @property
    def n(self) -> int:
        return len(self._L)

    @property
    def cdim(self) -> int:
        return self.n

    @property
    def S(self) -> typing.Tuple[typing.Tuple[Operator, ...], ...]:
        return self._S

    @property
    def L(self) -> typing.Tuple[Operator, ...]:
        return self._L

    @property
    def H(self) -> Operator:
        return self._H

    @property
    def space(self) -> HilbertSpace:
        return self._space

    def is_static(self) -> bool:
        return self._space.is_trivial()

    def expanded(self, space: HilbertSpace = None) -> SLHTriplet:
        """
        Same triplet with every entry embedded into a common space (default: the triplet's own space).
        """
        space = self._space if space is None else space.union(self._space)

        return SLHTriplet([[s.embed(space) for s in row] for row in self._S],
                          [l.embed(space) for l in self._L],
                          self._H.embed(space))

    def relabel(self, mapping: typing.Callable[[str], str]) -> SLHTriplet:
        return SLHTriplet([[s.relabel(mapping) for s in row] for row in self._S],
                          [l.relabel(mapping) for l in self._L],
                          self._H.relabel(mapping))

    def residuals(self) -> typing.Tuple[float, float]:
        """
        @return: (max |S^dag S - 1| and |S S^dag - 1| entry, max |H - H^dag| entry)
        """
        n = self.n
        unitarity = 0.0
        S_dag = [[self._S[j][i].dag() for j in range(n)] for i in range(n)]

        for i in range(n):
            for j in range(n):
                expected = 1 if i == j else 0
                left = operator_dot([S_dag[i][m] for m in range(n)], [self._S[m][j] for m in range(n)])
                right = operator_dot([self._S[i][m] for m in range(n)], [S_dag[m][j] for m in range(n)])
                unitarity = max(unitarity, (left - expected).max_abs(), (right - expected).max_abs())

        return unitarity, self._H.hermitian_residual()

    def check(self, context: str = "model") -> SLHTriplet:
        """
        Applies the tolerance policy: residuals up to 1e-10 pass silently, up to 1e-6 are logged
        as warnings, anything larger is an error.
        """
        unitarity, hermiticity = self.residuals()
        logger.info(f"{context}: unitarity residual {unitarity:.3e}, hermiticity residual {hermiticity:.3e}")

        for name, residual in [("S unitarity", unitarity), ("H hermiticity", hermiticity)]:
            if residual > ERROR_TOLERANCE:
                raise AlgebraError(f"{context}: {name} violated by {residual:.3e}")
            elif residual > WARN_TOLERANCE:
                logger.warning(f"{context}: {name} violated by {residual:.3e} (tolerated)")

        return self

    def max_difference(self, other: SLHTriplet) -> float:
        if self.n != other.n:
            raise AlgebraError(f"Cannot compare triplets with {self.n} and {other.n} channels")

        diffs = [(self._H - other.H).max_abs()]
        diffs += [(a - b).max_abs() for a, b in zip(self._L, other.L)]
        diffs += [(a - b).max_abs() for row_a, row_b in zip(self._S, other.S) for a, b in zip(row_a, row_b)]
        return max(diffs)

    def allclose(self, other: SLHTriplet, atol: float = 1e-12) -> bool:
        return self.n == other.n and self.max_difference(other) <= atol

    def __repr__(self):
        return f"SLHTriplet(n={self.n}, space={self._space})"


def operator_dot(row: typing.Sequence[Operator], col: typing.Sequence[Operator]) -> Operator:
    result = Operator.zero()
    for a, b in zip(row, col):
        if a.is_zero() or b.is_zero():
            continue
        result = result + a * b

    return result

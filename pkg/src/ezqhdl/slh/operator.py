from __future__ import annotations

import numbers
import typing

import numpy as np
import scipy.sparse

from ezqhdl.errors import SpaceMismatchError, ModelFormatError
from ezqhdl.slh.hilbert_space import HilbertSpace

OperatorLike = typing.Union["Operator", numbers.Number]


class Operator:
    """
    Sparse complex matrix acting on a HilbertSpace. Operators on different spaces are combined by
    embedding both into the union space (identity on the missing modes). Operators on the trivial
    space are 1x1 scalars and stay that way until they meet a modal operator.
    """

    def __init__(self, space: HilbertSpace, matrix):
        matrix = scipy.sparse.csr_matrix(matrix, dtype=complex)

        if matrix.shape != (space.dimension, space.dimension):
            raise SpaceMismatchError(f"Matrix of shape {matrix.shape} does not fit {space} "
                                     f"(dimension {space.dimension})")

        matrix.sum_duplicates()
        matrix.eliminate_zeros()
        matrix.sort_indices()
        self._space = space
        self._matrix = matrix

    @staticmethod
    def scalar(value: numbers.Number) -> Operator:
        return Operator(HilbertSpace.trivial(), [[complex(value)]])

    @staticmethod
    def zero() -> Operator:
        return Operator.scalar(0)

    @staticmethod
    def identity(space: HilbertSpace = None) -> Operator:
        if space is None:
            space = HilbertSpace.trivial()

        return Operator(space, scipy.sparse.identity(space.dimension, dtype=complex, format="csr"))

    @staticmethod
    def annihilation(label: str, dim: int) -> Operator:
        """
        Truncated annihilation operator with <n|a|n+1> = sqrt(n+1).
        """
        if dim < 2:
            raise ValueError(f"Fock dimension of mode {label} must be at least 2, got {dim}")

        return Operator(HilbertSpace.mode(label, dim), scipy.sparse.diags(np.sqrt(np.arange(1, dim)), 1))

    @staticmethod
    def creation(label: str, dim: int) -> Operator:
        return Operator.annihilation(label, dim).dag()

    @staticmethod
    def number(label: str, dim: int) -> Operator:
        return Operator(HilbertSpace.mode(label, dim), scipy.sparse.diags(np.arange(dim, dtype=float), 0))

    @staticmethod
    def transition(label: str, dim: int, target: int, source: int) -> Operator:
        """
        |target><source| on a single mode, 0-based basis indices.
        """
        matrix = scipy.sparse.coo_matrix(([1.0], ([target], [source])), shape=(dim, dim))
        return Operator(HilbertSpace.mode(label, dim), matrix)

    @staticmethod
    def coerce(value: OperatorLike) -> Operator:
        if isinstance(value, Operator):
            return value

        if isinstance(value, numbers.Number):
            return Operator.scalar(value)

        raise TypeError(f"Cannot interpret {type(value).__name__} as an operator")

    @property
    def space(self) -> HilbertSpace:
        return self._space

    @property
    def matrix(self) -> scipy.sparse.csr_matrix:
        return self._matrix

    @property
    def dimension(self) -> int:
        return self._space.dimension

    def is_scalar(self) -> bool:
        return self._space.is_trivial()

    def scalar_value(self) -> complex:
        if not self.is_scalar():
            raise SpaceMismatchError(f"Operator on {self._space} is not a scalar")

        return complex(self._matrix[0, 0])

    def is_zero(self) -> bool:
        return self._matrix.count_nonzero() == 0

    def max_abs(self) -> float:
        if self._matrix.nnz == 0:
            return 0.0

        return float(np.max(np.abs(self._matrix.data)))

    def to_dense(self) -> np.ndarray:
        return self._matrix.toarray()

    def embed(self, space: HilbertSpace) -> Operator:
        if space == self._space:
            return self

        if not space.contains(self._space):
            raise SpaceMismatchError(f"Cannot embed operator on {self._space} into {space}")

        missing_dim = space.dimension // self._space.dimension
        matrix = scipy.sparse.kron(self._matrix, scipy.sparse.identity(missing_dim, format="csr"), format="csr")

        perm = space.embedding_permutation(self._space.labels)
        if not np.array_equal(perm, np.arange(len(perm))):
            matrix = matrix[perm][:, perm]

        return Operator(space, matrix)

    def relabel(self, mapping: typing.Callable[[str], str]) -> Operator:
        """
        Renames modes. The tensor factors are reordered when the new labels sort differently.
        """
        target = self._space.relabel(mapping)
        if target.labels == [mapping(label) for label in self._space.labels]:
            return Operator(target, self._matrix)

        perm = target.embedding_permutation([mapping(label) for label in self._space.labels])
        return Operator(target, self._matrix[perm][:, perm])

    def dag(self) -> Operator:
        return Operator(self._space, self._matrix.conj().transpose())

    def imag_part(self) -> Operator:
        """
        Im{A} = (A - A^dagger) / 2i
        """
        return (self - self.dag()) * (1 / 2j)

    def hermitian_residual(self) -> float:
        return (self - self.dag()).max_abs()

    def allclose(self, other: OperatorLike, atol: float = 1e-12) -> bool:
        return (self - Operator.coerce(other)).max_abs() <= atol

    @staticmethod
    def unify(*operators: OperatorLike) -> typing.List[Operator]:
        operators = [Operator.coerce(o) for o in operators]
        space = HilbertSpace.trivial()
        for o in operators:
            space = space.union(o.space)

        return [o.embed(space) for o in operators]

    def __add__(self, other: OperatorLike) -> Operator:
        a, b = Operator.unify(self, other)
        return Operator(a.space, a.matrix + b.matrix)

    def __radd__(self, other: OperatorLike) -> Operator:
        return Operator.coerce(other) + self

    def __sub__(self, other: OperatorLike) -> Operator:
        a, b = Operator.unify(self, other)
        return Operator(a.space, a.matrix - b.matrix)

    def __rsub__(self, other: OperatorLike) -> Operator:
        return Operator.coerce(other) - self

    def __neg__(self) -> Operator:
        return Operator(self._space, -self._matrix)

    def __mul__(self, other: OperatorLike) -> Operator:
        if isinstance(other, numbers.Number):
            return Operator(self._space, self._matrix * complex(other))

        a, b = Operator.unify(self, other)
        return Operator(a.space, a.matrix @ b.matrix)

    def __rmul__(self, other: OperatorLike) -> Operator:
        if isinstance(other, numbers.Number):
            return Operator(self._space, self._matrix * complex(other))

        return Operator.coerce(other) * self

    def __matmul__(self, other: OperatorLike) -> Operator:
        return self * other

    def __truediv__(self, other: numbers.Number) -> Operator:
        return self * (1 / complex(other))

    def to_json(self, space: HilbertSpace = None) -> typing.Dict[str, typing.Any]:
        matrix = (self if space is None else self.embed(space)).matrix.tocoo()
        order = np.lexsort((matrix.col, matrix.row))

        return {
            "shape": [int(matrix.shape[0]), int(matrix.shape[1])],
            "entries": [[int(matrix.row[i]), int(matrix.col[i]), float(matrix.data[i].real), float(matrix.data[i].imag)]
                        for i in order]
        }

    @staticmethod
    def from_json(data: typing.Dict[str, typing.Any], space: HilbertSpace) -> Operator:
        try:
            rows, cols = data["shape"]
            entries = data["entries"]
        except (KeyError, TypeError, ValueError) as e:
            raise ModelFormatError(f"Malformed sparse operator: {e}")

        if (rows, cols) != (space.dimension, space.dimension):
            raise ModelFormatError(f"Operator shape {rows}x{cols} does not match space dimension {space.dimension}")

        if len(entries) == 0:
            return Operator(space, scipy.sparse.csr_matrix((rows, cols), dtype=complex))

        entries = np.asarray(entries, dtype=float)
        values = entries[:, 2] + 1j * entries[:, 3]
        matrix = scipy.sparse.coo_matrix((values, (entries[:, 0].astype(int), entries[:, 1].astype(int))),
                                         shape=(rows, cols))
        return Operator(space, matrix)

    def __repr__(self):
        if self.is_scalar():
            return f"Operator({self.scalar_value()})"

        return f"Operator({self._space}, nnz={self._matrix.nnz})"

from __future__ import annotations

import functools
import math
import typing

import numpy as np

from ezqhdl.errors import SpaceMismatchError


class HilbertSpace:
    """
    Ordered product of truncated Fock modes. Factors are always sorted by label so that the tensor
    ordering of a joint operator never depends on the order in which modes were first encountered.
    """

    def __init__(self, modes: typing.Iterable[typing.Tuple[str, int]] = ()):
        seen: typing.Dict[str, int] = {}
        for label, dim in modes:
            if dim < 1:
                raise ValueError(f"Mode {label} must have a positive dimension, got {dim}")

            if label in seen and seen[label] != dim:
                raise SpaceMismatchError(f"Mode {label} declared with conflicting dimensions {seen[label]} and {dim}")

            seen[label] = dim

        self._modes: typing.Tuple[typing.Tuple[str, int], ...] = tuple(sorted(seen.items()))

    @staticmethod
    def trivial() -> HilbertSpace:
        return _TRIVIAL

    @staticmethod
    def mode(label: str, dim: int) -> HilbertSpace:
        return HilbertSpace([(label, dim)])

    @property
    def modes(self) -> typing.Tuple[typing.Tuple[str, int], ...]:
        return self._modes

    @property
    def labels(self) -> typing.List[str]:
        return [label for label, _ in self._modes]

    @property
    def dims(self) -> typing.List[int]:
        return [dim for _, dim in self._modes]

    @property
    def dimension(self) -> int:
        return math.prod(self.dims)

    def is_trivial(self) -> bool:
        return len(self._modes) == 0

    def dim_of(self, label: str) -> int:
        for mode_label, dim in self._modes:
            if mode_label == label:
                return dim

        raise SpaceMismatchError(f"Mode {label} is not part of space {self}")

    def union(self, other: HilbertSpace) -> HilbertSpace:
        if self == other or other.is_trivial():
            return self

        if self.is_trivial():
            return other

        return HilbertSpace(self._modes + other._modes)

    def contains(self, other: HilbertSpace) -> bool:
        own = dict(self._modes)
        return all(own.get(label) == dim for label, dim in other.modes)

    def relabel(self, mapping: typing.Callable[[str], str]) -> HilbertSpace:
        return HilbertSpace((mapping(label), dim) for label, dim in self._modes)

    def embedding_permutation(self, source_labels: typing.Sequence[str]) -> np.ndarray:
        """
        Basis index permutation for operators whose tensor factors are given in source_labels order
        (followed by every mode of this space not listed there).

        @param source_labels: labels of the source factors, each part of this space
        @return: perm such that target basis index t corresponds to source basis index perm[t]
        """
        return _embedding_permutation(self._modes, tuple(source_labels))

    def to_json(self) -> typing.List[typing.Dict[str, typing.Any]]:
        return [{"label": label, "dim": dim} for label, dim in self._modes]

    @staticmethod
    def from_json(entries: typing.List[typing.Dict[str, typing.Any]]) -> HilbertSpace:
        return HilbertSpace((str(e["label"]), int(e["dim"])) for e in entries)

    def __eq__(self, other):
        return isinstance(other, HilbertSpace) and self._modes == other._modes

    def __hash__(self):
        return hash(self._modes)

    def __repr__(self):
        if self.is_trivial():
            return "HilbertSpace(trivial)"

        return "HilbertSpace(" + ", ".join(f"{label}:{dim}" for label, dim in self._modes) + ")"


_TRIVIAL = HilbertSpace()


@functools.lru_cache(maxsize=256)
def _embedding_permutation(target_modes: typing.Tuple[typing.Tuple[str, int], ...],
                           source_labels: typing.Tuple[str, ...]) -> np.ndarray:
    target_labels = [label for label, _ in target_modes]
    dims = dict(target_modes)

    missing = [label for label in target_labels if label not in source_labels]
    current_order = list(source_labels) + missing

    total = math.prod(dims[label] for label in current_order)
    index = np.arange(total).reshape([dims[label] for label in current_order])
    axes = [current_order.index(label) for label in target_labels]

    return index.transpose(axes).reshape(-1)

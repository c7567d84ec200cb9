"""
Symbolic circuit expressions over the series, concatenation and feedback operations. Nodes are immutable and compare structurally.
"""
from __future__ import annotations

import dataclasses
import functools
import typing

from ezqhdl import permutations
from ezqhdl.errors import CircuitError


class CircuitExpression:

    @property
    def cdim(self) -> int:
        raise NotImplementedError()

    def children(self) -> typing.Tuple[CircuitExpression, ...]:
        return ()

    def to_text(self) -> str:
        """
        One-line algebraic notation, e.g. "(b1 ⊞ a) ◁ P(2,1)"
        """
        raise NotImplementedError()

    def __str__(self):
        return self.to_text()


@dataclasses.dataclass(frozen=True)
class ComponentRef(CircuitExpression):
    name: str
    label: str
    n_channels: int
    params: typing.Tuple[typing.Tuple[str, str], ...] = ()

    def __post_init__(self):
        if self.n_channels < 1:
            raise CircuitError(f"Component {self.label} must have at least one channel")

    @property
    def cdim(self) -> int:
        return self.n_channels

    def to_text(self) -> str:
        return self.label


@dataclasses.dataclass(frozen=True)
class Series(CircuitExpression):
    """
    left <| right: the outputs of right feed the inputs of left.
    """
    left: CircuitExpression
    right: CircuitExpression

    def __post_init__(self):
        if self.left.cdim != self.right.cdim:
            raise CircuitError(f"Series product of expressions with {self.left.cdim} and {self.right.cdim} channels")

    @functools.cached_property
    def cdim(self) -> int:
        return self.left.cdim

    def children(self):
        return self.left, self.right

    def to_text(self) -> str:
        return f"{_wrap(self.left, Series)} ◁ {_wrap(self.right, Series)}"


@dataclasses.dataclass(frozen=True)
class Concatenation(CircuitExpression):
    operands: typing.Tuple[CircuitExpression, ...]

    def __post_init__(self):
        if len(self.operands) == 0:
            raise CircuitError("Concatenation of an empty operand list")

    @functools.cached_property
    def cdim(self) -> int:
        return sum(o.cdim for o in self.operands)

    def children(self):
        return self.operands

    def to_text(self) -> str:
        return " ⊞ ".join(_wrap(o, Concatenation) for o in self.operands)


@dataclasses.dataclass(frozen=True)
class Feedback(CircuitExpression):
    inner: CircuitExpression
    k: int
    l: int

    def __post_init__(self):
        n = self.inner.cdim
        if n < 2:
            raise CircuitError(f"Feedback needs an expression with at least two channels, got {n}")

        if not (1 <= self.k <= n and 1 <= self.l <= n):
            raise CircuitError(f"Feedback indices ({self.k}, {self.l}) out of range for {n} channels")

    @functools.cached_property
    def cdim(self) -> int:
        return self.inner.cdim - 1

    def children(self):
        return self.inner,

    def to_text(self) -> str:
        return f"[{self.inner.to_text()}]_{{{self.k}→{self.l}}}"


@dataclasses.dataclass(frozen=True)
class Permutation(CircuitExpression):
    sigma: typing.Tuple[int, ...]

    def __post_init__(self):
        if not permutations.is_permutation(self.sigma):
            raise CircuitError(f"{self.sigma} is not a bijective image tuple")

    @property
    def cdim(self) -> int:
        return len(self.sigma)

    def to_text(self) -> str:
        return "P(" + ",".join(str(s) for s in self.sigma) + ")"


@dataclasses.dataclass(frozen=True)
class Identity(CircuitExpression):
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise CircuitError(f"Identity system needs at least one channel, got {self.n}")

    @property
    def cdim(self) -> int:
        return self.n

    def to_text(self) -> str:
        return f"1_{self.n}"


def _wrap(e: CircuitExpression, parent: type) -> str:
    if isinstance(e, (Series, Concatenation)) and not isinstance(e, parent):
        return f"({e.to_text()})"

    return e.to_text()


def series(a: CircuitExpression, b: CircuitExpression) -> CircuitExpression:
    """
    Feeds all outputs of the upstream expression a into the downstream expression b, i.e. b <| a.
    """
    if a.cdim != b.cdim:
        raise CircuitError(f"Series product of expressions with {a.cdim} and {b.cdim} channels")

    return Series(b, a)


def concat(xs: typing.Sequence[CircuitExpression]) -> CircuitExpression:
    if len(xs) == 0:
        raise CircuitError("Concatenation of an empty operand list")

    operands = []
    for x in xs:
        if isinstance(x, Concatenation):
            operands.extend(x.operands)
        else:
            operands.append(x)

    if len(operands) == 1:
        return operands[0]

    return Concatenation(tuple(operands))


def feedback(q: CircuitExpression, k: int, l: int) -> CircuitExpression:
    return Feedback(q, k, l)


def leaves(e: CircuitExpression) -> typing.List[ComponentRef]:
    if isinstance(e, ComponentRef):
        return [e]

    return [leaf for c in e.children() for leaf in leaves(c)]


def count_feedback(e: CircuitExpression) -> int:
    return (1 if isinstance(e, Feedback) else 0) + sum(count_feedback(c) for c in e.children())

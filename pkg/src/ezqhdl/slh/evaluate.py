from __future__ import annotations

import logging
import typing

from ezqhdl.circuit.expression import CircuitExpression, ComponentRef, Series, Concatenation, Feedback, \
    Permutation, Identity
from ezqhdl.errors import BindingError
from ezqhdl.slh import algebra
from ezqhdl.slh.triplet import SLHTriplet

logger = logging.getLogger(__name__)


class ComponentBinding:
    """
    Maps ComponentRef instance labels to concrete triplets.
    """

    def __init__(self, bindings: typing.Mapping[str, SLHTriplet] = None):
        self._bindings: typing.Dict[str, SLHTriplet] = dict(bindings or {})

    def bind(self, label: str, triplet: SLHTriplet) -> ComponentBinding:
        self._bindings[label] = triplet
        return self

    def __getitem__(self, label: str) -> SLHTriplet:
        if label not in self._bindings:
            raise BindingError(f"No model bound to component instance {label}")

        return self._bindings[label]

    def __contains__(self, label: str) -> bool:
        return label in self._bindings

    def labels(self) -> typing.List[str]:
        return list(self._bindings.keys())


def evaluate(expression: CircuitExpression, bindings: ComponentBinding) -> SLHTriplet:
    """
    Folds a circuit expression into a concrete triplet using the circuit algebra.
    """
    if isinstance(expression, ComponentRef):
        triplet = bindings[expression.label]
        if triplet.n != expression.cdim:
            raise BindingError(f"Model bound to {expression.label} has {triplet.n} channels, "
                               f"expression expects {expression.cdim}")
        return triplet

    if isinstance(expression, Series):
        return algebra.series_product(evaluate(expression.left, bindings), evaluate(expression.right, bindings))

    if isinstance(expression, Concatenation):
        return algebra.concatenation(*[evaluate(o, bindings) for o in expression.operands])

    if isinstance(expression, Feedback):
        return algebra.feedback_reduce(evaluate(expression.inner, bindings), expression.k, expression.l)

    if isinstance(expression, Permutation):
        return algebra.permutation_system(expression.sigma)

    if isinstance(expression, Identity):
        return algebra.identity_system(expression.n)

    raise TypeError(f"Unknown circuit expression node {type(expression).__name__}")

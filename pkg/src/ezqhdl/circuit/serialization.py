"""
Tagged-union JSON form of circuit expressions. Feedback indices are 1-based.
"""
import typing

from ezqhdl.circuit.expression import CircuitExpression, ComponentRef, Series, Concatenation, Feedback, \
    Permutation, Identity
from ezqhdl.errors import CircuitError


def expression_to_json(e: CircuitExpression) -> typing.Dict[str, typing.Any]:
    if isinstance(e, ComponentRef):
        return {"op": "ref", "name": e.name, "label": e.label, "cdim": e.cdim, "params": dict(e.params)}

    if isinstance(e, Series):
        return {"op": "series", "left": expression_to_json(e.left), "right": expression_to_json(e.right)}

    if isinstance(e, Concatenation):
        return {"op": "concat", "operands": [expression_to_json(o) for o in e.operands]}

    if isinstance(e, Feedback):
        return {"op": "feedback", "inner": expression_to_json(e.inner), "k": e.k, "l": e.l}

    if isinstance(e, Permutation):
        return {"op": "perm", "sigma": list(e.sigma)}

    if isinstance(e, Identity):
        return {"op": "id", "n": e.n}

    raise TypeError(f"Unknown circuit expression node {type(e).__name__}")


def expression_from_json(data: typing.Dict[str, typing.Any]) -> CircuitExpression:
    try:
        op = data["op"]

        if op == "ref":
            return ComponentRef(data["name"], data["label"], int(data["cdim"]),
                                tuple(sorted(data.get("params", {}).items())))
        if op == "series":
            return Series(expression_from_json(data["left"]), expression_from_json(data["right"]))
        if op == "concat":
            return Concatenation(tuple(expression_from_json(o) for o in data["operands"]))
        if op == "feedback":
            return Feedback(expression_from_json(data["inner"]), int(data["k"]), int(data["l"]))
        if op == "perm":
            return Permutation(tuple(int(s) for s in data["sigma"]))
        if op == "id":
            return Identity(int(data["n"]))
    except (KeyError, TypeError, ValueError) as e:
        raise CircuitError(f"Malformed circuit expression JSON: {e}")

    raise CircuitError(f"Unknown circuit expression op {op!r}")

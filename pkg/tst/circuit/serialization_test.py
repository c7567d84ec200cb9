import json
import unittest

from ezqhdl.circuit.expression import ComponentRef, Permutation, Identity, series, concat, feedback
from ezqhdl.circuit.serialization import expression_to_json, expression_from_json
from ezqhdl.errors import CircuitError


class SerializationTest(unittest.TestCase):

    def test_nested_expression(self):
        k = ComponentRef("kerrcavity", "k", 2, (("chi", "chi"), ("delta", "delta")))
        upstream = concat([k, Permutation((1,))])
        e = feedback(series(upstream, concat([Identity(1), ComponentRef("p", "p", 2)])), 3, 1)
        data = json.loads(json.dumps(expression_to_json(e)))

        self.assertEqual("feedback", data["op"])
        self.assertEqual(3, data["k"])
        self.assertEqual(e, expression_from_json(data))

    def test_ref_fields(self):
        data = expression_to_json(ComponentRef("phase", "p", 1, (("phi", "phi / 2"),)))
        self.assertEqual({"op": "ref", "name": "phase", "label": "p", "cdim": 1, "params": {"phi": "phi / 2"}},
                         data)

    def test_unknown_op(self):
        with self.assertRaises(CircuitError):
            expression_from_json({"op": "tensor"})

    def test_missing_field(self):
        with self.assertRaises(CircuitError):
            expression_from_json({"op": "perm"})

    def test_invalid_node(self):
        with self.assertRaises(CircuitError):
            expression_from_json({"op": "perm", "sigma": [1, 1]})

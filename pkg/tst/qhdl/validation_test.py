import unittest

from ezqhdl import data
from ezqhdl.errors import NetlistError
from ezqhdl.qhdl.design import PortDirection
from ezqhdl.qhdl.parser import parse_source
from ezqhdl.qhdl.validation import validate, Endpoint


def _design(body: str, signals: str = "", generics: str = ""):
    source = (f"entity x is {generics} port (a : in fieldmode; b : out fieldmode); end x;\n"
              "architecture s of x is\n"
              "component p port (i : in fieldmode; o : out fieldmode); end component p;\n"
              "component q generic (g : real); port (i : in fieldmode; o : out fieldmode); end component q;\n"
              f"{signals}\n"
              "begin\n"
              f"{body}\n"
              "end s;\n")
    return parse_source(source, "net.qhdl")


class ValidateTest(unittest.TestCase):

    def test_mach_zehnder(self):
        graph = validate(parse_source(data.read_text(data.MACH_ZEHNDER)), "machzehnder")

        self.assertEqual(3, len(graph.instances))
        self.assertEqual(["s1", "s2", "s3"], [s.name for s in graph.internal_signals])
        self.assertEqual(Endpoint("b1", "out1", PortDirection.OUT), graph.signals[0].driver)
        self.assertEqual(Endpoint("p", "in1", PortDirection.IN), graph.signals[0].sink)
        self.assertEqual(Endpoint("b1", "in1", PortDirection.IN), graph.bindings["a"])
        self.assertEqual(Endpoint("b2", "out2", PortDirection.OUT), graph.bindings["d"])
        self.assertEqual({"phi"}, set(graph.instance("p").generic_map))

    def test_chain_through_signal(self):
        graph = validate(_design("u1: p port map (i => a, o => m);\nu2: p port map (i => m, o => b);",
                                 "signal m : fieldmode;"), "x")
        self.assertEqual(1, len(graph.internal_signals))
        self.assertEqual(Endpoint("u2", "o", PortDirection.OUT), graph.bindings["b"])

    def test_direct_assignment(self):
        graph = validate(_design("b <= a;"), "x")
        self.assertEqual(Endpoint(None, "b", PortDirection.OUT), graph.bindings["a"])
        self.assertEqual(Endpoint(None, "a", PortDirection.IN), graph.bindings["b"])
        self.assertEqual([], graph.internal_signals)

    def test_assignment_from_signal(self):
        graph = validate(_design("u: p port map (i => a, o => m);\nb <= m;", "signal m : fieldmode;"), "x")
        self.assertEqual(Endpoint("u", "o", PortDirection.OUT), graph.bindings["b"])

    def test_generic_expression_of_entity_generics(self):
        graph = validate(_design("u: q generic map (g => 2 * c) port map (i => a, o => b);",
                                 generics="generic (c : real := 1.0);"), "x")
        self.assertEqual("2 * c", graph.instance("u").generic_map["g"].text)

    def test_integer_into_real_generic(self):
        graph = validate(_design("u: q generic map (g => 3) port map (i => a, o => b);"), "x")
        self.assertEqual(3, graph.instance("u").generic_map["g"].evaluate())


class ValidateDiagnosticsTest(unittest.TestCase):

    def assertNetlistError(self, fragment: str, body: str, signals: str = "", generics: str = "", line: int = None):
        with self.assertRaises(NetlistError) as ctx:
            validate(_design(body, signals, generics), "x")

        self.assertIn(fragment, str(ctx.exception))
        if line is not None:
            self.assertEqual(line, ctx.exception.position.line)

    def test_two_drivers(self):
        self.assertNetlistError("signal m has two drivers",
                                "u1: p port map (i => a, o => m);\nu2: p port map (i => m, o => m);",
                                "signal m : fieldmode;")

    def test_unmapped_port(self):
        self.assertNetlistError("unmapped port o in instance u", "u: p port map (i => a);", line=7)

    def test_dangling_signal(self):
        self.assertNetlistError("dangling signal m",
                                "u1: p port map (i => a, o => m);\nu2: p port map (i => n, o => b);",
                                "signal m, n : fieldmode;", line=5)

    def test_unused_signal(self):
        self.assertNetlistError("signal m is not connected", "u: p port map (i => a, o => b);",
                                "signal m : fieldmode;")

    def test_polarity(self):
        self.assertNetlistError("polarity violation", "u: p port map (i => b, o => a);")

    def test_assignment_polarity(self):
        self.assertNetlistError("entity input a cannot be assigned", "a <= b;")

    def test_type_mismatch(self):
        self.assertNetlistError("type mismatch: complex expression c assigned to real generic g",
                                "u: q generic map (g => c) port map (i => a, o => b);",
                                generics="generic (c : complex := (1, 2));")

    def test_unknown_generic_reference(self):
        self.assertNetlistError("references y", "u: q generic map (g => y) port map (i => a, o => b);")

    def test_unknown_component(self):
        self.assertNetlistError("unknown component z in instance u", "u: z port map (i => a, o => b);", line=7)

    def test_unknown_signal(self):
        self.assertNetlistError("unknown signal or port w", "u: p port map (i => a, o => w);")

    def test_unconnected_entity_port(self):
        self.assertNetlistError("entity port a is not connected", "")

    def test_port_connected_twice(self):
        self.assertNetlistError("entity port a is connected more than once",
                                "u1: p port map (i => a, o => b);\nu2: p port map (i => a, o => b);")

    def test_missing_entity(self):
        with self.assertRaises(NetlistError):
            validate(parse_source(data.read_text(data.MACH_ZEHNDER)), "nothing")

    def test_ambiguous_architecture(self):
        source = data.read_text(data.MACH_ZEHNDER) + "\narchitecture other of machzehnder is\nbegin\nc <= a;\nd <= b;\nend;\n"
        design = parse_source(source)
        with self.assertRaises(NetlistError) as ctx:
            validate(design, "machzehnder")
        self.assertIn("choose one of", str(ctx.exception))

        graph = validate(design, "machzehnder", "other")
        self.assertEqual(0, len(graph.instances))

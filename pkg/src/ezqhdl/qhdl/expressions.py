"""
Arithmetic expressions used for generic defaults, generic maps and command-line parameter values:
"+ - * /", unary sign, parentheses, numeric literals, complex literals "(re, im)", generic names and the
constant "pi". Values are computed lazily from an environment of generic values.
"""
from __future__ import annotations

import enum
import math
import re
import typing

import parsimonious
from parsimonious import Grammar
from parsimonious.exceptions import ParseError, VisitationError

from ezqhdl.data_structures.deferred_value import DeferredValue
from ezqhdl.errors import QHDLSyntaxError, SourcePosition, DesignError
from ezqhdl.qhdl.tokens import NUMBER_PATTERN, IDENTIFIER_PATTERN

Number = typing.Union[int, float, complex]
Environment = typing.Mapping[str, Number]

CONSTANTS: typing.Dict[str, float] = {"pi": math.pi}


class NumericKind(enum.IntEnum):
    INT = 0
    REAL = 1
    COMPLEX = 2

    @staticmethod
    def of(value: Number) -> NumericKind:
        if isinstance(value, complex):
            return NumericKind.COMPLEX

        if isinstance(value, float):
            return NumericKind.REAL

        if isinstance(value, int):
            return NumericKind.INT

        raise TypeError(f"{value!r} is not a numeric value")

    def accepts(self, value: Number) -> bool:
        return NumericKind.of(value) <= self

    def coerce(self, value: Number) -> Number:
        if not self.accepts(value):
            raise TypeError(f"{value!r} is not a valid {self.name.lower()} value")

        if self == NumericKind.COMPLEX:
            return complex(value)

        if self == NumericKind.REAL:
            return float(value)

        return value

    @property
    def qhdl_name(self) -> str:
        return self.name.lower()


# representative values used to infer the kind of an expression without knowing generic values
_KIND_SAMPLES = [
    {NumericKind.INT: 1, NumericKind.REAL: 1.5, NumericKind.COMPLEX: 1 + 1j},
    {NumericKind.INT: 3, NumericKind.REAL: 2.5, NumericKind.COMPLEX: 1.5 - 0.5j},
]

SUM, PRODUCT, UNARY, ATOM = range(4)


class GenericExpression:
    """
    A parsed expression. Equality is by canonical text, which is also what the pretty printer emits.
    """

    def __init__(self, text: str, names: typing.FrozenSet[str], value: DeferredValue[Environment, Number],
                 precedence: int = ATOM):
        self.text = text
        self.names = names
        self.precedence = precedence
        self._value = value

    @staticmethod
    def literal(value: Number) -> GenericExpression:
        if isinstance(value, complex):
            text = f"({repr(value.real)}, {repr(value.imag)})"
        else:
            text = repr(value)

        return GenericExpression(text, frozenset(), DeferredValue.of(value))

    def evaluate(self, env: Environment = None) -> Number:
        """
        @param env: generic name -> value; must cover every name in self.names
        """
        env = dict(env or {})
        missing = sorted(n for n in self.names if n not in env)
        if missing:
            raise KeyError(missing[0])

        return self._value.resolve(env)

    def kind(self, kinds: typing.Mapping[str, NumericKind]) -> NumericKind:
        """
        Infers the numeric kind of the expression given the kinds of the generics it references.
        """
        for samples in _KIND_SAMPLES:
            try:
                return NumericKind.of(self._value.resolve({n: samples[kinds[n]] for n in self.names}))
            except ZeroDivisionError:
                continue

        raise ZeroDivisionError(f"division by zero in {self.text}")

    def __eq__(self, other):
        return isinstance(other, GenericExpression) and self.text == other.text

    def __hash__(self):
        return hash(self.text)

    def __repr__(self):
        return f"GenericExpression({self.text!r})"

    def __str__(self):
        return self.text


def _binary(op: str, left: GenericExpression, right: GenericExpression) -> GenericExpression:
    precedence = SUM if op in "+-" else PRODUCT
    left_text = f"({left.text})" if left.precedence < precedence else left.text
    right_text = f"({right.text})" if right.precedence <= precedence else right.text

    operations = {
        "+": lambda a, b: a + b,
        "-": lambda a, b: a - b,
        "*": lambda a, b: a * b,
        "/": lambda a, b: a / b,
    }

    return GenericExpression(f"{left_text} {op} {right_text}", left.names | right.names,
                             operations[op](left._value, right._value), precedence)


def _negate(operand: GenericExpression) -> GenericExpression:
    text = f"({operand.text})" if operand.precedence <= UNARY else operand.text
    return GenericExpression(f"-{text}", operand.names, -operand._value, UNARY)


def _make_complex(real: Number, imag: Number) -> complex:
    if isinstance(real, complex) or isinstance(imag, complex):
        raise TypeError("complex literal components must be real")

    return complex(real, imag)


# noinspection PyMethodMayBeStatic
class GenericExpressionVisitor(parsimonious.NodeVisitor):

    def visit_expression(self, node, visited_children):
        _, result, _ = visited_children
        return result

    def visit_sum(self, node, visited_children):
        return self._fold(visited_children)

    def visit_product(self, node, visited_children):
        return self._fold(visited_children)

    def _fold(self, visited_children):
        result, rest = visited_children
        for _, op, _, operand in (rest if isinstance(rest, list) else []):
            result = _binary(op, result, operand)

        return result

    def visit_unary(self, node, visited_children):
        # can be either a signed operand or a primary
        return visited_children[0]

    def visit_signed(self, node, visited_children):
        sign, _, operand = visited_children
        return _negate(operand) if sign == "-" else operand

    def visit_primary(self, node, visited_children):
        return visited_children[0]

    def visit_complex_literal(self, node, visited_children):
        real, imag = visited_children[2], visited_children[6]
        value = DeferredValue.combine(_make_complex, real._value, imag._value)
        return GenericExpression(f"({real.text}, {imag.text})", real.names | imag.names, value)

    def visit_group(self, node, visited_children):
        return visited_children[2]

    def visit_number(self, node, visited_children):
        text = node.text
        value = int(text) if re.fullmatch(r"[0-9]+", text) else float(text)
        return GenericExpression(text, frozenset(), DeferredValue.of(value))

    def visit_name(self, node, visited_children):
        name = node.text.lower()
        if name in CONSTANTS:
            return GenericExpression(name, frozenset(), DeferredValue.of(CONSTANTS[name]))

        return GenericExpression(name, frozenset([name]), DeferredValue.lookup(name))

    def visit_sign(self, node, visited_children):
        return node.text

    def visit_addop(self, node, visited_children):
        return node.text

    def visit_mulop(self, node, visited_children):
        return node.text

    def generic_visit(self, node, visited_children):
        """ The generic visit method. """
        return visited_children or node


# shared with the design grammar, which supplies its own "_" rule
EXPRESSION_RULES = rf"""
        sum                 = product (_ addop _ product)*
        product             = unary (_ mulop _ unary)*
        unary               = signed / primary
        signed              = sign _ unary

        primary             = complex_literal / group / number / name
        complex_literal     = "(" _ sum _ "," _ sum _ ")"
        group               = "(" _ sum _ ")"

        number              = ~r"{NUMBER_PATTERN}"
        name                = ~r"{IDENTIFIER_PATTERN}"i

        sign                = "+" / "-"
        addop               = "+" / "-"
        mulop               = "*" / "/"
        """

# rule names whose failure reads as a missing expression
EXPRESSION_RULE_NAMES = frozenset(["sum", "product", "unary", "signed", "primary", "complex_literal", "group",
                                   "number", "name", "sign", "addop", "mulop"])


class GenericExpressionParser:

    grammar = Grammar(
        r"""
        expression          = _ sum _
        """ + EXPRESSION_RULES + r"""
        _                   = ~r"\s*"
        """)

    @staticmethod
    def parse(text: str, position: SourcePosition = None) -> GenericExpression:
        try:
            syntax_tree = GenericExpressionParser.grammar.parse(text)
        except ParseError as e:
            raise QHDLSyntaxError(f"malformed expression {text.strip()!r} (unexpected input at offset {e.pos})",
                                  position)

        try:
            return GenericExpressionVisitor().visit(syntax_tree)
        except VisitationError as e:
            raise DesignError(f"invalid expression {text.strip()!r}: {e.original_class.__name__}", position)


def parse_expression(text: str, position: SourcePosition = None) -> GenericExpression:
    return GenericExpressionParser.parse(text, position)


def parse_value(text: str) -> Number:
    """
    Parses a command-line parameter value. Complex values may be written "re,im" or "(re, im)".
    The value may only use literals and pi.
    """
    stripped = text.strip()
    if "," in stripped and not stripped.startswith("("):
        stripped = f"({stripped})"

    expression = parse_expression(stripped)
    if expression.names:
        raise DesignError(f"parameter value {text!r} must not reference other parameters")

    try:
        return expression.evaluate()
    except (ZeroDivisionError, TypeError) as e:
        raise DesignError(f"cannot evaluate parameter value {text!r}: {e}")

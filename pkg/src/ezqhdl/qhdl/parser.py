"""
Parser for QHDL. The design grammar embeds the expression grammar, so generic defaults and generic map actuals
are parsed in the same pass as the structure; parsimonious' furthest failure becomes the syntax error.
"""
from __future__ import annotations

import dataclasses
import logging
import typing

from parsimonious import Grammar
from parsimonious.exceptions import ParseError

from ezqhdl.errors import QHDLError, QHDLSyntaxError, DesignError, SourcePosition
from ezqhdl.qhdl.design import DesignFile, EntityDecl, ArchitectureDecl, ComponentDecl, GenericDecl, PortDecl, \
    PortDirection, SignalDecl, InstanceAssign, SignalAssign, GenericAssoc, PortAssoc
from ezqhdl.qhdl.expressions import GenericExpressionVisitor, NumericKind, EXPRESSION_RULES, EXPRESSION_RULE_NAMES
from ezqhdl.qhdl.tokens import tokenize, token_at, IDENTIFIER_PATTERN, SKIP_PATTERN, RESERVED_PATTERN

logger = logging.getLogger(__name__)

_KINDS = {
    "kw_real": NumericKind.REAL,
    "kw_complex": NumericKind.COMPLEX,
    "kw_int": NumericKind.INT,
    "kw_integer": NumericKind.INT,
}

_DIRECTIONS = {
    "kw_in": PortDirection.IN,
    "kw_out": PortDirection.OUT,
}

# how a failed rule reads in "expected ..., found ..."
_EXPECTED = {
    "semi": "';'",
    "colon": "':'",
    "comma": "','",
    "lpar": "'('",
    "rpar": "')'",
    "assign": "':='",
    "arrow": "'=>'",
    "le": "'<='",
    "identifier": "identifier",
    "kind": "'real', 'complex' or 'int'",
    "direction": "'in' or 'out'",
    "end_of_file": "'entity' or 'architecture'",
}


def _describe_rule(name: str) -> str:
    if name in _EXPECTED:
        return _EXPECTED[name]

    if name in EXPRESSION_RULE_NAMES:
        return "expression"

    if name.startswith("kw_"):
        return f"'{name[3:]}'"

    return name.replace("_", " ") or "design unit"


def _describe_input(source: str, offset: int) -> str:
    if offset >= len(source):
        return "end of file"

    token = token_at(source, offset)
    return repr(token if token is not None else source[offset])


def _items(visited) -> list:
    """ Children of a "*" or "?" that matched nothing come back as the bare node. """
    return visited if isinstance(visited, list) else []


def _optional(visited, default=None):
    return visited[0] if isinstance(visited, list) else default


@dataclasses.dataclass(frozen=True)
class _Identifier:
    name: str
    position: SourcePosition


class QHDLParser:

    grammar = Grammar(
        rf"""
        design_file         = _ design_unit* end_of_file
        design_unit         = entity / architecture
        end_of_file         = ~r"\Z"

        entity              = kw_entity identifier kw_is generic_clause? port_clause kw_end identifier? semi
        component           = kw_component identifier generic_clause? port_clause kw_end kw_component identifier? semi

        generic_clause      = kw_generic lpar generic_decl (semi generic_decl)* rpar semi
        generic_decl        = identifier_list colon kind default_value?
        default_value       = assign sum _
        kind                = kw_real / kw_complex / kw_integer / kw_int

        port_clause         = kw_port lpar port_decl (semi port_decl)* rpar semi
        port_decl           = identifier_list colon direction kw_fieldmode
        direction           = kw_in / kw_out

        architecture        = kw_architecture identifier kw_of identifier kw_is component* signal_decl* kw_begin
                              statement* kw_end identifier? semi
        signal_decl         = kw_signal identifier_list colon kw_fieldmode semi
        statement           = instance / assignment
        instance            = identifier colon identifier generic_map? kw_port kw_map
                              lpar port_assoc (comma port_assoc)* rpar semi
        generic_map         = kw_generic kw_map lpar generic_assoc (comma generic_assoc)* rpar
        generic_assoc       = identifier arrow sum _
        port_assoc          = identifier arrow identifier
        assignment          = identifier le identifier semi

        identifier_list     = identifier (comma identifier)*
        identifier          = !~r"{RESERVED_PATTERN}"i ~r"{IDENTIFIER_PATTERN}"i _

        kw_entity           = ~r"entity\b"i _
        kw_architecture     = ~r"architecture\b"i _
        kw_component        = ~r"component\b"i _
        kw_signal           = ~r"signal\b"i _
        kw_port             = ~r"port\b"i _
        kw_generic          = ~r"generic\b"i _
        kw_map              = ~r"map\b"i _
        kw_begin            = ~r"begin\b"i _
        kw_end              = ~r"end\b"i _
        kw_of               = ~r"of\b"i _
        kw_is               = ~r"is\b"i _
        kw_in               = ~r"in\b"i _
        kw_out              = ~r"out\b"i _
        kw_fieldmode        = ~r"fieldmode\b"i _
        kw_real             = ~r"real\b"i _
        kw_complex          = ~r"complex\b"i _
        kw_int              = ~r"int\b"i _
        kw_integer          = ~r"integer\b"i _

        semi                = ";" _
        colon               = ":" _
        comma               = "," _
        lpar                = "(" _
        rpar                = ")" _
        assign              = ":=" _
        arrow               = "=>" _
        le                  = "<=" _
        """ + EXPRESSION_RULES + rf"""
        _                   = ~r"{SKIP_PATTERN}"
        """)

    @staticmethod
    def parse(source: str, file_name: str = "<input>") -> DesignFile:
        """
        @param source: QHDL source text, already known to be free of lexical errors
        @param file_name: used in diagnostics and kept on the design
        """
        try:
            syntax_tree = QHDLParser.grammar.parse(source)
        except ParseError as e:
            expected = _describe_rule(e.expr.name if e.expr is not None else "")
            raise QHDLSyntaxError(f"expected {expected}, found {_describe_input(source, e.pos)}",
                                  SourcePosition(file_name, e.line(), e.column()))

        return QHDLVisitor(source, file_name).visit(syntax_tree)


# noinspection PyMethodMayBeStatic
class QHDLVisitor(GenericExpressionVisitor):

    unwrapped_exceptions = (QHDLError,)

    def __init__(self, source: str, file_name: str):
        self.source = source
        self.file_name = file_name

    def _position(self, node) -> SourcePosition:
        return SourcePosition.at(self.source, node.start, self.file_name)

    def _check_end(self, name: _Identifier, end_name: typing.Optional[_Identifier], kind: str):
        if end_name is not None and end_name.name != name.name:
            raise QHDLSyntaxError(f"'end {end_name.name}' does not close {kind} {name.name}", end_name.position)

    def visit_design_file(self, node, visited_children):
        _, units, _ = visited_children
        units = _items(units)
        return DesignFile(tuple(u for u in units if isinstance(u, EntityDecl)),
                          tuple(u for u in units if isinstance(u, ArchitectureDecl)), self.file_name)

    def visit_design_unit(self, node, visited_children):
        return visited_children[0]

    def visit_entity(self, node, visited_children):
        _, name, _, generics, ports, _, end_name, _ = visited_children
        self._check_end(name, _optional(end_name), "entity")
        return EntityDecl(name.name, _optional(generics, ()), ports, self._position(node))

    def visit_component(self, node, visited_children):
        _, name, generics, ports, _, _, end_name, _ = visited_children
        self._check_end(name, _optional(end_name), "component")
        return ComponentDecl(name.name, _optional(generics, ()), ports, self._position(node))

    def visit_generic_clause(self, node, visited_children):
        _, _, first, rest, _, _ = visited_children
        return tuple(first + [decl for _, more in _items(rest) for decl in more])

    def visit_generic_decl(self, node, visited_children):
        names, _, kind, default = visited_children
        return [GenericDecl(n.name, kind, _optional(default), n.position) for n in names]

    def visit_default_value(self, node, visited_children):
        _, expression, _ = visited_children
        return expression

    def visit_kind(self, node, visited_children):
        return _KINDS[node.children[0].expr_name]

    def visit_port_clause(self, node, visited_children):
        _, _, first, rest, _, _ = visited_children
        return tuple(first + [decl for _, more in _items(rest) for decl in more])

    def visit_port_decl(self, node, visited_children):
        names, _, direction, _ = visited_children
        return [PortDecl(n.name, direction, n.position) for n in names]

    def visit_direction(self, node, visited_children):
        return _DIRECTIONS[node.children[0].expr_name]

    def visit_architecture(self, node, visited_children):
        _, name, _, entity, _, components, signals, _, statements, _, end_name, _ = visited_children
        self._check_end(name, _optional(end_name), "architecture")
        statements = _items(statements)
        return ArchitectureDecl(name.name, entity.name,
                                tuple(_items(components)),
                                tuple(s for decl in _items(signals) for s in decl),
                                tuple(s for s in statements if isinstance(s, InstanceAssign)),
                                tuple(s for s in statements if isinstance(s, SignalAssign)),
                                self._position(node))

    def visit_signal_decl(self, node, visited_children):
        _, names, _, _, _ = visited_children
        return [SignalDecl(n.name, n.position) for n in names]

    def visit_statement(self, node, visited_children):
        return visited_children[0]

    def visit_instance(self, node, visited_children):
        name, _, component, generic_map, _, _, _, first, rest, _, _ = visited_children
        port_map = [first] + [assoc for _, assoc in _items(rest)]
        return InstanceAssign(name.name, component.name, tuple(_optional(generic_map, ())), tuple(port_map),
                              name.position)

    def visit_generic_map(self, node, visited_children):
        _, _, _, first, rest, _ = visited_children
        return [first] + [assoc for _, assoc in _items(rest)]

    def visit_generic_assoc(self, node, visited_children):
        formal, _, actual, _ = visited_children
        return GenericAssoc(formal.name, actual, formal.position)

    def visit_port_assoc(self, node, visited_children):
        formal, _, actual = visited_children
        return PortAssoc(formal.name, actual.name, formal.position)

    def visit_assignment(self, node, visited_children):
        target, _, source, _ = visited_children
        return SignalAssign(target.name, source.name, target.position)

    def visit_identifier_list(self, node, visited_children):
        first, rest = visited_children
        return [first] + [identifier for _, identifier in _items(rest)]

    def visit_identifier(self, node, visited_children):
        return _Identifier(node.children[1].text.lower(), self._position(node))


def _check_interface(decl, kind: str):
    seen: typing.Set[str] = set()
    for item in list(decl.generics) + list(decl.ports):
        if item.name in seen:
            raise DesignError(f"duplicate name {item.name} in {kind} {decl.name}", item.position)
        seen.add(item.name)

    seen_out = None
    for port in decl.ports:
        if port.direction == PortDirection.OUT:
            seen_out = seen_out or port
        elif seen_out is not None:
            raise DesignError(f"in port {port.name} of {kind} {decl.name} follows out port {seen_out.name}; "
                              f"all in ports must precede all out ports", port.position)


def _check_unique(items, what: str, scope: str):
    seen: typing.Set[str] = set()
    for item in items:
        if item.name in seen:
            raise DesignError(f"duplicate {what} {item.name} in {scope}", item.position)
        seen.add(item.name)


def check_design(design: DesignFile):
    """
    Parse-time validation: unique names, in-before-out port order and architectures referring to declared entities.
    """
    _check_unique(design.entities, "entity", design.file_name)

    for entity in design.entities:
        _check_interface(entity, "entity")

    for architecture in design.architectures:
        entity = design.entity(architecture.entity)
        if entity is None:
            raise DesignError(f"architecture {architecture.name} refers to undeclared entity {architecture.entity}",
                              architecture.position)

        scope = f"architecture {architecture.name}"
        _check_unique(architecture.components, "component", scope)
        _check_unique(architecture.signals, "signal", scope)
        _check_unique(architecture.instances, "instance", scope)

        for component in architecture.components:
            _check_interface(component, "component")

        port_names = {p.name for p in entity.ports}
        for signal in architecture.signals:
            if signal.name in port_names:
                raise DesignError(f"signal {signal.name} shadows a port of entity {entity.name}", signal.position)

    architecture_names = [(a.entity, a.name) for a in design.architectures]
    for i, key in enumerate(architecture_names):
        if key in architecture_names[:i]:
            raise DesignError(f"duplicate architecture {key[1]} of entity {key[0]}", design.architectures[i].position)


def parse(source: str, file_name: str = "<input>") -> DesignFile:
    design = QHDLParser.parse(source, file_name)
    check_design(design)
    logger.info(f"Parsed {file_name}: {len(design.entities)} entities, {len(design.architectures)} architectures")
    return design


def parse_source(source: str, file_name: str = "<input>") -> DesignFile:
    """
    Lexical errors are reported before syntax errors.
    """
    tokenize(source, file_name)
    return parse(source, file_name)


def parse_file(path: str) -> DesignFile:
    with open(path, "r", encoding="utf-8") as f:
        return parse_source(f.read(), path)

"""
Design tree produced by the QHDL parser. All names are lower case; source positions are kept for diagnostics
but do not take part in equality, so two sources differing only in layout or case give equal trees.
"""
from __future__ import annotations

import dataclasses
import enum
import typing

from ezqhdl.errors import SourcePosition
from ezqhdl.qhdl.expressions import GenericExpression, NumericKind


class PortDirection(enum.Enum):
    IN = "in"
    OUT = "out"


def _position():
    return dataclasses.field(default=None, compare=False, repr=False)


@dataclasses.dataclass(frozen=True)
class GenericDecl:
    name: str
    kind: NumericKind
    default: typing.Optional[GenericExpression] = None
    position: typing.Optional[SourcePosition] = _position()


@dataclasses.dataclass(frozen=True)
class PortDecl:
    name: str
    direction: PortDirection
    position: typing.Optional[SourcePosition] = _position()


@dataclasses.dataclass(frozen=True)
class InterfaceDecl:
    """
    Common shape of entities and component declarations: ordered generics and ordered ports.
    """
    name: str
    generics: typing.Tuple[GenericDecl, ...] = ()
    ports: typing.Tuple[PortDecl, ...] = ()
    position: typing.Optional[SourcePosition] = _position()

    @property
    def in_ports(self) -> typing.List[PortDecl]:
        return [p for p in self.ports if p.direction == PortDirection.IN]

    @property
    def out_ports(self) -> typing.List[PortDecl]:
        return [p for p in self.ports if p.direction == PortDirection.OUT]

    def port(self, name: str) -> typing.Optional[PortDecl]:
        return next((p for p in self.ports if p.name == name), None)

    def generic(self, name: str) -> typing.Optional[GenericDecl]:
        return next((g for g in self.generics if g.name == name), None)

    @property
    def generic_kinds(self) -> typing.Dict[str, NumericKind]:
        return {g.name: g.kind for g in self.generics}


@dataclasses.dataclass(frozen=True)
class EntityDecl(InterfaceDecl):
    pass


@dataclasses.dataclass(frozen=True)
class ComponentDecl(InterfaceDecl):
    pass


@dataclasses.dataclass(frozen=True)
class SignalDecl:
    name: str
    position: typing.Optional[SourcePosition] = _position()


@dataclasses.dataclass(frozen=True)
class GenericAssoc:
    formal: str
    actual: GenericExpression
    position: typing.Optional[SourcePosition] = _position()


@dataclasses.dataclass(frozen=True)
class PortAssoc:
    formal: str
    actual: str
    position: typing.Optional[SourcePosition] = _position()


@dataclasses.dataclass(frozen=True)
class InstanceAssign:
    name: str
    component: str
    generic_map: typing.Tuple[GenericAssoc, ...] = ()
    port_map: typing.Tuple[PortAssoc, ...] = ()
    position: typing.Optional[SourcePosition] = _position()


@dataclasses.dataclass(frozen=True)
class SignalAssign:
    """
    Concurrent assignment "target <= source".
    """
    target: str
    source: str
    position: typing.Optional[SourcePosition] = _position()


@dataclasses.dataclass(frozen=True)
class ArchitectureDecl:
    name: str
    entity: str
    components: typing.Tuple[ComponentDecl, ...] = ()
    signals: typing.Tuple[SignalDecl, ...] = ()
    instances: typing.Tuple[InstanceAssign, ...] = ()
    assignments: typing.Tuple[SignalAssign, ...] = ()
    position: typing.Optional[SourcePosition] = _position()

    def component(self, name: str) -> typing.Optional[ComponentDecl]:
        return next((c for c in self.components if c.name == name), None)


@dataclasses.dataclass(frozen=True)
class DesignFile:
    entities: typing.Tuple[EntityDecl, ...] = ()
    architectures: typing.Tuple[ArchitectureDecl, ...] = ()
    file_name: str = dataclasses.field(default="<input>", compare=False)

    def entity(self, name: str) -> typing.Optional[EntityDecl]:
        return next((e for e in self.entities if e.name == name.lower()), None)

    def architectures_of(self, entity_name: str) -> typing.List[ArchitectureDecl]:
        return [a for a in self.architectures if a.entity == entity_name.lower()]

    def to_json(self) -> typing.Dict[str, typing.Any]:
        def interface(decl: InterfaceDecl):
            return {
                "name": decl.name,
                "generics": [{"name": g.name, "kind": g.kind.qhdl_name,
                              "default": None if g.default is None else g.default.text} for g in decl.generics],
                "ports": [{"name": p.name, "direction": p.direction.value} for p in decl.ports],
            }

        return {
            "file": self.file_name,
            "entities": [interface(e) for e in self.entities],
            "architectures": [{
                "name": a.name,
                "entity": a.entity,
                "components": [interface(c) for c in a.components],
                "signals": [s.name for s in a.signals],
                "instances": [{
                    "name": i.name,
                    "component": i.component,
                    "generic_map": {g.formal: g.actual.text for g in i.generic_map},
                    "port_map": {p.formal: p.actual for p in i.port_map},
                } for i in a.instances],
                "assignments": [{"target": s.target, "source": s.source} for s in a.assignments],
            } for a in self.architectures],
        }

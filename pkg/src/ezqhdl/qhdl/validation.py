"""
Resolution of an architecture into a checked netlist graph: every signal connects exactly one driver (instance
out-port or entity in-port) to exactly one sink (instance in-port or entity out-port), and every entity port is
bound exactly once.
"""
from __future__ import annotations

import dataclasses
import logging
import typing

from ezqhdl.errors import NetlistError, SourcePosition
from ezqhdl.qhdl.design import DesignFile, EntityDecl, ArchitectureDecl, ComponentDecl, InstanceAssign, \
    PortDirection
from ezqhdl.qhdl.expressions import GenericExpression

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class Endpoint:
    """
    A port of an instance (owner = instance name) or of the enclosing entity (owner = None).
    """
    owner: typing.Optional[str]
    port: str
    direction: PortDirection

    @property
    def is_entity_port(self) -> bool:
        return self.owner is None

    def __str__(self):
        return f"{self.owner}:{self.port}" if self.owner is not None else f"entity:{self.port}"


@dataclasses.dataclass(frozen=True)
class ResolvedInstance:
    name: str
    component: ComponentDecl
    generic_map: typing.Dict[str, GenericExpression]
    port_map: typing.Dict[str, str]
    position: typing.Optional[SourcePosition] = dataclasses.field(default=None, compare=False)

    @property
    def in_ports(self) -> typing.List[str]:
        return [p.name for p in self.component.in_ports]

    @property
    def out_ports(self) -> typing.List[str]:
        return [p.name for p in self.component.out_ports]


@dataclasses.dataclass(frozen=True)
class SignalRoute:
    name: str
    driver: Endpoint
    sink: Endpoint

    @property
    def is_internal(self) -> bool:
        return not self.driver.is_entity_port and not self.sink.is_entity_port


@dataclasses.dataclass
class NetlistGraph:
    entity: EntityDecl
    architecture: ArchitectureDecl
    instances: typing.List[ResolvedInstance]
    signals: typing.List[SignalRoute]
    # entity port name -> the endpoint on the other end of its connection
    bindings: typing.Dict[str, Endpoint]

    @property
    def internal_signals(self) -> typing.List[SignalRoute]:
        return [s for s in self.signals if s.is_internal]

    def instance(self, name: str) -> ResolvedInstance:
        return next(i for i in self.instances if i.name == name)


class _Net:

    def __init__(self, name: str, position: typing.Optional[SourcePosition], implicit: bool = False):
        self.name = name
        self.position = position
        self.implicit = implicit
        self.drivers: typing.List[Endpoint] = []
        self.sinks: typing.List[Endpoint] = []


class NetlistValidator:

    def __init__(self, design: DesignFile, entity: EntityDecl, architecture: ArchitectureDecl):
        self.design = design
        self.entity = entity
        self.architecture = architecture
        self.nets: typing.Dict[str, _Net] = {s.name: _Net(s.name, s.position) for s in architecture.signals}
        # entity port -> instance endpoints attached to it without a signal
        self.direct: typing.Dict[str, typing.List[Endpoint]] = {p.name: [] for p in entity.ports}

    def _error(self, message: str, position: SourcePosition = None) -> NetlistError:
        return NetlistError(f"{message} (architecture {self.architecture.name} of {self.entity.name})",
                            position or self.architecture.position)

    def _resolve_instance(self, instance: InstanceAssign) -> ResolvedInstance:
        component = self.architecture.component(instance.component)
        if component is None:
            raise self._error(f"unknown component {instance.component} in instance {instance.name}",
                              instance.position)

        if len(component.in_ports) != len(component.out_ports) or not component.ports:
            raise self._error(f"component {component.name} must declare as many in ports as out ports "
                              f"({len(component.in_ports)} in, {len(component.out_ports)} out)", component.position)

        generic_map: typing.Dict[str, GenericExpression] = {}
        entity_kinds = self.entity.generic_kinds
        for assoc in instance.generic_map:
            generic = component.generic(assoc.formal)
            if generic is None:
                raise self._error(f"unknown generic {assoc.formal} of component {component.name}", assoc.position)
            if assoc.formal in generic_map:
                raise self._error(f"generic {assoc.formal} mapped twice in instance {instance.name}", assoc.position)

            undeclared = sorted(n for n in assoc.actual.names if n not in entity_kinds)
            if undeclared:
                raise self._error(f"expression for {assoc.formal} references {undeclared[0]}, "
                                  f"which is not a generic of entity {self.entity.name}", assoc.position)

            try:
                kind = assoc.actual.kind(entity_kinds)
            except (ZeroDivisionError, TypeError) as e:
                raise self._error(f"invalid expression for {assoc.formal}: {e}", assoc.position)

            if kind > generic.kind:
                raise self._error(f"type mismatch: {kind.qhdl_name} expression {assoc.actual.text} assigned to "
                                  f"{generic.kind.qhdl_name} generic {assoc.formal}", assoc.position)

            generic_map[assoc.formal] = assoc.actual

        port_map: typing.Dict[str, str] = {}
        for assoc in instance.port_map:
            port = component.port(assoc.formal)
            if port is None:
                raise self._error(f"unknown port {assoc.formal} of component {component.name}", assoc.position)
            if assoc.formal in port_map:
                raise self._error(f"port {assoc.formal} mapped twice in instance {instance.name}", assoc.position)

            self._attach(Endpoint(instance.name, port.name, port.direction), assoc.actual, assoc.position)
            port_map[assoc.formal] = assoc.actual

        for port in component.ports:
            if port.name not in port_map:
                raise self._error(f"unmapped port {port.name} in instance {instance.name} of {component.name}",
                                  instance.position)

        return ResolvedInstance(instance.name, component, generic_map, port_map, instance.position)

    def _attach(self, endpoint: Endpoint, actual: str, position: SourcePosition):
        if actual in self.nets:
            net = self.nets[actual]
            (net.drivers if endpoint.direction == PortDirection.OUT else net.sinks).append(endpoint)
            return

        entity_port = self.entity.port(actual)
        if entity_port is None:
            raise self._error(f"unknown signal or port {actual}", position)

        if entity_port.direction == endpoint.direction:
            self.direct[actual].append(endpoint)
        elif endpoint.direction == PortDirection.IN:
            raise self._error(f"polarity violation: instance input {endpoint} wired to entity output {actual}",
                              position)
        else:
            raise self._error(f"polarity violation: instance output {endpoint} wired to entity input {actual}",
                              position)

    def _assign(self, target: str, source: str, position: SourcePosition):
        target_port = self.entity.port(target)
        source_port = self.entity.port(source)

        if target not in self.nets and target_port is None:
            raise self._error(f"unknown signal or port {target}", position)
        if source not in self.nets and source_port is None:
            raise self._error(f"unknown signal or port {source}", position)

        if target_port is not None and target_port.direction != PortDirection.OUT:
            raise self._error(f"polarity violation: entity input {target} cannot be assigned", position)
        if source_port is not None and source_port.direction != PortDirection.IN:
            raise self._error(f"polarity violation: entity output {source} cannot drive {target}", position)
        if target_port is None and source_port is None:
            raise self._error(f"assignment {target} <= {source} must involve an entity port", position)

        if target_port is not None and source_port is not None:
            name = f"{source}->{target}"
            net = _Net(name, position, implicit=True)
            self.nets[name] = net
        else:
            net = self.nets[target if target_port is None else source]

        if source_port is not None:
            net.drivers.append(Endpoint(None, source, PortDirection.IN))
        if target_port is not None:
            net.sinks.append(Endpoint(None, target, PortDirection.OUT))

    def validate(self) -> NetlistGraph:
        instances = [self._resolve_instance(i) for i in self.architecture.instances]

        for assignment in self.architecture.assignments:
            self._assign(assignment.target, assignment.source, assignment.position)

        signals = []
        for net in self.nets.values():
            endpoints = len(net.drivers) + len(net.sinks)
            if endpoints == 0:
                raise self._error(f"signal {net.name} is not connected", net.position)
            if len(net.drivers) > 1:
                raise self._error(f"signal {net.name} has two drivers: {net.drivers[0]} and {net.drivers[1]}",
                                  net.position)
            if len(net.sinks) > 1:
                raise self._error(f"signal {net.name} has two sinks: {net.sinks[0]} and {net.sinks[1]}",
                                  net.position)
            if endpoints == 1:
                lone = (net.drivers + net.sinks)[0]
                raise self._error(f"dangling signal {net.name}: only connected to {lone}", net.position)

            signals.append(SignalRoute(net.name, net.drivers[0], net.sinks[0]))

        bindings = self._bind_entity_ports(signals)

        logger.info(f"Validated {self.entity.name}({self.architecture.name}): {len(instances)} instances, "
                    f"{len(signals)} signals")
        return NetlistGraph(self.entity, self.architecture, instances, signals, bindings)

    def _bind_entity_ports(self, signals: typing.List[SignalRoute]) -> typing.Dict[str, Endpoint]:
        attached: typing.Dict[str, typing.List[Endpoint]] = {k: list(v) for k, v in self.direct.items()}
        for signal in signals:
            if signal.driver.is_entity_port:
                attached[signal.driver.port].append(signal.sink)
            if signal.sink.is_entity_port:
                attached[signal.sink.port].append(signal.driver)

        bindings = {}
        for port in self.entity.ports:
            targets = attached[port.name]
            if not targets:
                raise self._error(f"entity port {port.name} is not connected", port.position)
            if len(targets) > 1:
                raise self._error(f"entity port {port.name} is connected more than once", port.position)
            bindings[port.name] = targets[0]

        if len(self.entity.in_ports) != len(self.entity.out_ports):
            raise self._error(f"entity {self.entity.name} must declare as many in ports as out ports",
                              self.entity.position)

        return bindings


def select_architecture(design: DesignFile, entity_name: str,
                        architecture_name: str = None) -> typing.Tuple[EntityDecl, ArchitectureDecl]:
    entity = design.entity(entity_name)
    if entity is None:
        raise NetlistError(f"no entity {entity_name} in {design.file_name}")

    candidates = design.architectures_of(entity.name)
    if architecture_name is not None:
        candidates = [a for a in candidates if a.name == architecture_name.lower()]
        if not candidates:
            raise NetlistError(f"no architecture {architecture_name} of entity {entity.name}")
    elif not candidates:
        raise NetlistError(f"entity {entity.name} has no architecture", entity.position)
    elif len(candidates) > 1:
        raise NetlistError(f"entity {entity.name} has {len(candidates)} architectures; choose one of "
                           f"{', '.join(a.name for a in candidates)}", entity.position)

    return entity, candidates[0]


def validate(design: DesignFile, entity_name: str, architecture_name: str = None) -> NetlistGraph:
    entity, architecture = select_architecture(design, entity_name, architecture_name)
    return NetlistValidator(design, entity, architecture).validate()

from __future__ import annotations

import typing

from ezqhdl.qhdl.design import DesignFile, InterfaceDecl, ArchitectureDecl, InstanceAssign

_INDENT = "    "


def _interface(decl: InterfaceDecl, indent: str) -> typing.List[str]:
    lines = []
    if decl.generics:
        generics = [f"{g.name} : {g.kind.qhdl_name}" + (f" := {g.default.text}" if g.default is not None else "")
                    for g in decl.generics]
        lines.append(f"{indent}generic ({'; '.join(generics)});")

    ports = [f"{p.name} : {p.direction.value} fieldmode" for p in decl.ports]
    lines.append(f"{indent}port ({'; '.join(ports)});")
    return lines


def _instance(instance: InstanceAssign) -> str:
    text = f"{_INDENT}{instance.name}: {instance.component}"
    if instance.generic_map:
        text += f" generic map ({', '.join(f'{g.formal} => {g.actual.text}' for g in instance.generic_map)})"
    text += f" port map ({', '.join(f'{p.formal} => {p.actual}' for p in instance.port_map)});"
    return text


def _architecture(architecture: ArchitectureDecl) -> typing.List[str]:
    lines = [f"architecture {architecture.name} of {architecture.entity} is"]
    for component in architecture.components:
        lines.append(f"{_INDENT}component {component.name}")
        lines += _interface(component, _INDENT * 2)
        lines.append(f"{_INDENT}end component {component.name};")

    if architecture.signals:
        lines.append(f"{_INDENT}signal {', '.join(s.name for s in architecture.signals)} : fieldmode;")

    lines.append("begin")
    lines += [_instance(i) for i in architecture.instances]
    lines += [f"{_INDENT}{a.target} <= {a.source};" for a in architecture.assignments]
    lines.append(f"end {architecture.name};")
    return lines


def pretty_print(design: DesignFile) -> str:
    """
    Canonical QHDL text for a design tree. Parsing the result gives back an equal tree.
    """
    blocks = []
    for entity in design.entities:
        blocks.append("\n".join([f"entity {entity.name} is"] + _interface(entity, _INDENT) + [f"end {entity.name};"]))

    for architecture in design.architectures:
        blocks.append("\n".join(_architecture(architecture)))

    return "\n\n".join(blocks) + "\n"

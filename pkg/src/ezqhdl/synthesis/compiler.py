"""
Hierarchical compilation of an entity into a concrete SLH model.

Each architecture is validated, synthesized and simplified; its instances are bound to primitives, to recursively
compiled entities or to registered compiled models, and the expression is evaluated with the circuit algebra.
Modes are labelled by instance path, e.g. "nand1.k".
"""
from __future__ import annotations

import dataclasses
import logging
import typing

from ezqhdl.circuit.expression import CircuitExpression
from ezqhdl.circuit.simplify import simplify
from ezqhdl.decorators import logged_stage
from ezqhdl.errors import CompileError
from ezqhdl.qhdl.design import DesignFile, EntityDecl, GenericDecl, ComponentDecl
from ezqhdl.qhdl.expressions import Number
from ezqhdl.qhdl.validation import validate, NetlistGraph, ResolvedInstance
from ezqhdl.slh.evaluate import ComponentBinding, evaluate
from ezqhdl.slh.model_io import CompiledModel
from ezqhdl.slh.triplet import SLHTriplet
from ezqhdl.synthesis.library import DesignLibrary, FockDimensions, LibraryEntry
from ezqhdl.synthesis.netlist_synthesis import synthesize

logger = logging.getLogger(__name__)


@dataclasses.dataclass
class CompileResult:
    model: CompiledModel
    expression: CircuitExpression
    netlist: NetlistGraph


def resolve_generics(declared: typing.Sequence[GenericDecl],
                     given: typing.Mapping[str, Number],
                     owner: str) -> typing.Dict[str, Number]:
    """
    Binds values to declared generics: given values first, then declared defaults (which may use
    the generics before them), otherwise a missing parameter error. Values are coerced to the declared kind.
    """
    names = {g.name for g in declared}
    unknown = sorted(k for k in given if k not in names)
    if unknown:
        raise CompileError(f"{owner} has no generic {unknown[0]}")

    values: typing.Dict[str, Number] = {}
    for generic in declared:
        if generic.name in given:
            value = given[generic.name]
        elif generic.default is not None:
            try:
                value = generic.default.evaluate(values)
            except KeyError as e:
                raise CompileError(f"default of {generic.name} in {owner} uses {e.args[0]}, which is not bound")
            except (ZeroDivisionError, TypeError) as e:
                raise CompileError(f"cannot evaluate default of {generic.name} in {owner}: {e}")
        else:
            raise CompileError(f"missing parameter {generic.name} of {owner}")

        try:
            values[generic.name] = generic.kind.coerce(value)
        except TypeError:
            raise CompileError(f"parameter {generic.name} of {owner} must be {generic.kind.qhdl_name}, got {value!r}")

    return values


class CircuitCompiler:

    def __init__(self, library: DesignLibrary, fock: FockDimensions = None):
        self.library = library
        self.fock = fock or FockDimensions()

    def expression_for(self, design: DesignFile, entity_name: str,
                       architecture_name: str = None) -> typing.Tuple[CircuitExpression, NetlistGraph]:
        netlist = validate(design, entity_name, architecture_name)
        return simplify(synthesize(netlist)), netlist

    @logged_stage("compile")
    def compile(self, entity_name: str, architecture_name: str = None,
                params: typing.Mapping[str, Number] = None) -> CompileResult:
        design, entity = self.library.find_entity(entity_name)
        values = resolve_generics(entity.generics, {k.lower(): v for k, v in (params or {}).items()},
                                  f"entity {entity.name}")

        triplet, expression, netlist = self._compile_entity(design, entity, architecture_name, values, [])
        triplet = triplet.expanded().check(f"entity {entity.name}")

        model = CompiledModel(triplet,
                              input_ports=[p.name for p in entity.in_ports],
                              output_ports=[p.name for p in entity.out_ports],
                              metadata={"entity": entity.name, "architecture": netlist.architecture.name,
                                        "expression": expression.to_text()})

        logger.info(f"Compiled {entity.name}: {triplet.n} channels on {triplet.space}")
        return CompileResult(model, expression, netlist)

    def _compile_entity(self, design: DesignFile, entity: EntityDecl, architecture_name: typing.Optional[str],
                        values: typing.Dict[str, Number], path: typing.List[str]) \
            -> typing.Tuple[SLHTriplet, CircuitExpression, NetlistGraph]:
        if len(path) > 64:
            raise CompileError(f"component hierarchy too deep at {'.'.join(path)}; recursive entity?")

        expression, netlist = self.expression_for(design, entity.name, architecture_name)

        bindings = ComponentBinding()
        for instance in netlist.instances:
            bindings.bind(instance.name, self._bind_instance(design, instance, values, path))

        return evaluate(expression, bindings), expression, netlist

    def _bind_instance(self, design: DesignFile, instance: ResolvedInstance,
                       env: typing.Dict[str, Number], path: typing.List[str]) -> SLHTriplet:
        instance_path = path + [instance.name]
        label = ".".join(instance_path)
        component = instance.component

        given = self._instance_values(instance, component, env, label)
        entry = self.library.resolve(component.name, design)
        if entry.n_channels != len(component.in_ports):
            raise CompileError(f"component {component.name} of instance {label} declares {len(component.in_ports)} "
                               f"channels but {self._describe(entry)} has {entry.n_channels}")

        if entry.model is not None:
            if given:
                logger.warning(f"Instance {label}: generic values ignored by compiled model {component.name}")
            return entry.model.triplet.relabel(lambda mode: f"{label}.{mode}")

        if entry.entity is not None:
            values = resolve_generics(entry.entity.generics, given, f"entity {entry.entity.name} ({label})")
            logger.debug(f"Compiling {entry.entity.name} for instance {label}")
            triplet, _, _ = self._compile_entity(entry.design, entry.entity, None, values, instance_path)
            return triplet

        values = resolve_generics(entry.primitive.generics, given, f"{entry.primitive.name} ({label})")
        return entry.primitive.build(values, label, self.fock)

    @staticmethod
    def _instance_values(instance: ResolvedInstance, component: ComponentDecl,
                         env: typing.Dict[str, Number], label: str) -> typing.Dict[str, Number]:
        """
        Generic values fixed by the instance: its generic map, else the component declaration's default.
        """
        given: typing.Dict[str, Number] = {}
        for name, expression in instance.generic_map.items():
            try:
                given[name] = expression.evaluate(env)
            except (ZeroDivisionError, TypeError) as e:
                raise CompileError(f"cannot evaluate {name} => {expression.text} of instance {label}: {e}")

        for generic in component.generics:
            if generic.name not in given and generic.default is not None:
                try:
                    given[generic.name] = generic.default.evaluate(env)
                except KeyError as e:
                    raise CompileError(f"default of {generic.name} in component {component.name} ({label}) "
                                       f"uses {e.args[0]}, which is not bound")
                except (ZeroDivisionError, TypeError) as e:
                    raise CompileError(f"cannot evaluate default of {generic.name} in component {component.name} "
                                       f"of instance {label}: {e}")

        return given

    @staticmethod
    def _describe(entry: LibraryEntry) -> str:
        if entry.model is not None:
            return f"compiled model {entry.name}"
        if entry.entity is not None:
            return f"entity {entry.name}"
        return f"primitive {entry.name}"

"""
Conversion of a validated netlist into a circuit expression:

1. one ComponentRef per instance, with the port order of its component declaration
2. concatenate all of them, keeping ordered lists of the open output and input port labels
3. pad with an identity channel per internal signal (and one per entity passthrough)
4. feed each instance output driving an internal signal back into its padded identity input
5. feed each padded identity output into the instance input the signal ends in
6. permute the remaining open channels into entity port order: P_out <| Q <| P_in

Channel indices are always recomputed from the current label lists.
"""
from __future__ import annotations

import dataclasses
import logging
import typing

from ezqhdl.decorators import logged_stage
from ezqhdl import permutations
from ezqhdl.circuit.expression import CircuitExpression, ComponentRef, Identity, Permutation, concat, feedback, \
    series
from ezqhdl.errors import SynthesisDefect, NetlistError
from ezqhdl.qhdl.design import PortDirection
from ezqhdl.qhdl.validation import NetlistGraph, Endpoint, ResolvedInstance

logger = logging.getLogger(__name__)

PAD_OWNER = "#pad"


@dataclasses.dataclass(frozen=True)
class PortLabel:
    owner: typing.Optional[str]
    port: str
    direction: PortDirection

    @staticmethod
    def of(endpoint: Endpoint) -> PortLabel:
        return PortLabel(endpoint.owner, endpoint.port, endpoint.direction)

    @staticmethod
    def pad(index: int, direction: PortDirection) -> PortLabel:
        return PortLabel(PAD_OWNER, str(index), direction)

    @property
    def is_entity_port(self) -> bool:
        return self.owner is None

    def __str__(self):
        return f"{self.owner}:{self.port}" if self.owner is not None else f"entity:{self.port}"


@dataclasses.dataclass
class SynthesisState:
    expression: CircuitExpression
    outputs: typing.List[PortLabel]
    inputs: typing.List[PortLabel]
    pending: typing.List[typing.Tuple[PortLabel, PortLabel]]
    routed: typing.List[typing.Tuple[PortLabel, PortLabel]] = dataclasses.field(default_factory=list)
    padding: int = 0

    def check(self):
        if not len(self.outputs) == len(self.inputs) == self.expression.cdim:
            raise SynthesisDefect(f"label lists out of sync: {len(self.outputs)} outputs, {len(self.inputs)} "
                                  f"inputs for an expression with {self.expression.cdim} channels")

    def pad(self, count: int, out_labels: typing.List[PortLabel], in_labels: typing.List[PortLabel]):
        if count == 0:
            return

        self.expression = concat([self.expression, Identity(count)])
        self.outputs += out_labels
        self.inputs += in_labels
        self.padding += count
        self.check()

    def connect(self, output: PortLabel, target: PortLabel):
        """
        Closes a loop from an open output channel to an open input channel.
        """
        try:
            k = self.outputs.index(output) + 1
            l = self.inputs.index(target) + 1
        except ValueError:
            raise SynthesisDefect(f"cannot connect {output} to {target}: label no longer open")

        logger.debug(f"Feedback {output} (channel {k}) -> {target} (channel {l})")
        self.expression = feedback(self.expression, k, l)
        del self.outputs[k - 1]
        del self.inputs[l - 1]
        self.check()


def _component_ref(instance: ResolvedInstance) -> ComponentRef:
    params = tuple(sorted((formal, expression.text) for formal, expression in instance.generic_map.items()))
    return ComponentRef(instance.component.name, instance.name, len(instance.in_ports), params)


@logged_stage("synthesize")
def synthesize(netlist: NetlistGraph) -> CircuitExpression:
    entity = netlist.entity
    entity_ins = [p.name for p in entity.in_ports]
    entity_outs = [p.name for p in entity.out_ports]

    # entity port seen from the instance side
    entity_port_of: typing.Dict[PortLabel, str] = {}
    for port, endpoint in netlist.bindings.items():
        if not endpoint.is_entity_port:
            entity_port_of[PortLabel.of(endpoint)] = port

    operands: typing.List[CircuitExpression] = []
    outputs: typing.List[PortLabel] = []
    inputs: typing.List[PortLabel] = []
    for instance in netlist.instances:
        operands.append(_component_ref(instance))
        inputs += [PortLabel(instance.name, p, PortDirection.IN) for p in instance.in_ports]
        outputs += [PortLabel(instance.name, p, PortDirection.OUT) for p in instance.out_ports]

    internal = [(PortLabel.of(s.driver), PortLabel.of(s.sink)) for s in netlist.internal_signals]
    passthrough = [(s.driver.port, s.sink.port) for s in netlist.signals
                   if s.driver.is_entity_port and s.sink.is_entity_port]

    if not operands and not passthrough:
        raise NetlistError(f"entity {entity.name} has no channels", entity.position)

    if operands:
        state = SynthesisState(concat(operands), outputs, inputs, list(internal))
    else:
        state = SynthesisState(Identity(len(passthrough)),
                               [PortLabel(None, sink, PortDirection.OUT) for _, sink in passthrough],
                               [PortLabel(None, source, PortDirection.IN) for source, _ in passthrough], [])
        passthrough = []
    state.check()

    state.pad(len(internal),
              [PortLabel.pad(j, PortDirection.OUT) for j in range(len(internal))],
              [PortLabel.pad(j, PortDirection.IN) for j in range(len(internal))])
    state.pad(len(passthrough),
              [PortLabel(None, sink, PortDirection.OUT) for _, sink in passthrough],
              [PortLabel(None, source, PortDirection.IN) for source, _ in passthrough])

    for j, (driver, _) in enumerate(internal):
        state.connect(driver, PortLabel.pad(j, PortDirection.IN))

    while state.pending:
        j = len(state.routed)
        signal = state.pending.pop(0)
        state.connect(PortLabel.pad(j, PortDirection.OUT), signal[1])
        state.routed.append(signal)

    def entity_port(label: PortLabel) -> str:
        if label.is_entity_port:
            return label.port
        if label not in entity_port_of:
            raise SynthesisDefect(f"open channel {label} is not bound to an entity port")
        return entity_port_of[label]

    sigma_out = tuple(entity_outs.index(entity_port(label)) + 1 for label in state.outputs)
    sigma_in = permutations.invert(tuple(entity_ins.index(entity_port(label)) + 1 for label in state.inputs))

    result = state.expression
    if not permutations.is_identity(sigma_in):
        result = series(Permutation(sigma_in), result)
    if not permutations.is_identity(sigma_out):
        result = series(result, Permutation(sigma_out))

    logger.info(f"Synthesized {entity.name}: {len(netlist.instances)} components, {len(internal)} internal "
                f"signals, {result.cdim} channels")
    return result

"""
Compiled-model JSON files, the contract between the compile and simulate stages:

{"n": int, "space": [{"label": str, "dim": int}], "S": [[sparse-op]], "L": [sparse-op], "H": sparse-op}

with sparse-op = {"shape": [d, d], "entries": [[row, col, re, im], ...]}. Optional extra blocks: "ports"
(entity port names per channel) and "metadata".
"""
from __future__ import annotations

import json
import logging
import typing

from ezqhdl.errors import ModelFormatError
from ezqhdl.slh.hilbert_space import HilbertSpace
from ezqhdl.slh.operator import Operator
from ezqhdl.slh.triplet import SLHTriplet

logger = logging.getLogger(__name__)


class CompiledModel:

    def __init__(self,
                 triplet: SLHTriplet,
                 input_ports: typing.Optional[typing.List[str]] = None,
                 output_ports: typing.Optional[typing.List[str]] = None,
                 metadata: typing.Optional[typing.Dict[str, typing.Any]] = None):
        self.triplet = triplet
        self.input_ports = input_ports
        self.output_ports = output_ports
        self.metadata = metadata

    def channel_of(self, port: str) -> int:
        """
        @param port: input port name or 1-based channel number
        @return: 1-based channel index
        """
        if port.isdigit():
            channel = int(port)
        elif self.input_ports is not None and port.lower() in self.input_ports:
            channel = self.input_ports.index(port.lower()) + 1
        else:
            known = ", ".join(self.input_ports or [])
            raise ModelFormatError(f"Unknown input port {port!r}" + (f" (known ports: {known})" if known else ""))

        if not 1 <= channel <= self.triplet.n:
            raise ModelFormatError(f"Channel {channel} out of range for a model with {self.triplet.n} channels")

        return channel

    def to_json(self) -> typing.Dict[str, typing.Any]:
        space = self.triplet.space
        result = {
            "n": self.triplet.n,
            "space": space.to_json(),
            "S": [[s.to_json(space) for s in row] for row in self.triplet.S],
            "L": [l.to_json(space) for l in self.triplet.L],
            "H": self.triplet.H.to_json(space),
        }

        if self.input_ports is not None or self.output_ports is not None:
            result["ports"] = {"in": self.input_ports or [], "out": self.output_ports or []}

        if self.metadata is not None:
            result["metadata"] = self.metadata

        return result

    @staticmethod
    def from_json(data: typing.Dict[str, typing.Any]) -> CompiledModel:
        try:
            n = int(data["n"])
            space = HilbertSpace.from_json(data["space"])
            S = [[Operator.from_json(s, space) for s in row] for row in data["S"]]
            L = [Operator.from_json(l, space) for l in data["L"]]
            H = Operator.from_json(data["H"], space)
        except (KeyError, TypeError, ValueError) as e:
            raise ModelFormatError(f"Malformed compiled model: {e}")

        if len(L) != n or len(S) != n or any(len(row) != n for row in S):
            raise ModelFormatError(f"Compiled model declares n={n} but carries {len(L)} coupling operators")

        ports = data.get("ports")
        return CompiledModel(SLHTriplet(S, L, H),
                             input_ports=None if ports is None else [p.lower() for p in ports.get("in", [])],
                             output_ports=None if ports is None else [p.lower() for p in ports.get("out", [])],
                             metadata=data.get("metadata"))


def write_model(path: str, model: CompiledModel):
    with open(path, "w") as f:
        json.dump(model.to_json(), f)

    logger.info(f"Wrote model with {model.triplet.n} channels on {model.triplet.space} to {path}")


def read_model(path: str) -> CompiledModel:
    try:
        with open(path, "r") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"{path}: not valid JSON ({e})")
    except OSError as e:
        raise ModelFormatError(f"{path}: cannot read model ({e.strerror})")

    return CompiledModel.from_json(data)

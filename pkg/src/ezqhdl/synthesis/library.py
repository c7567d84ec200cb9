"""
Component lookup: compiled models registered by name, entities of the parsed QHDL files (the current file first,
then the others in command-line order) and finally the built-in primitive library.
"""
from __future__ import annotations

import dataclasses
import logging
import typing

from ezqhdl.errors import CompileError
from ezqhdl.qhdl.design import DesignFile, EntityDecl, GenericDecl
from ezqhdl.qhdl.expressions import NumericKind, Number
from ezqhdl.slh import components
from ezqhdl.slh.model_io import CompiledModel
from ezqhdl.slh.triplet import SLHTriplet

logger = logging.getLogger(__name__)


class FockDimensions:
    """
    Truncation dimension per mode label; "*" sets the dimension of every mode not named explicitly.
    """

    def __init__(self, dims: typing.Mapping[str, int] = None, default: typing.Optional[int] = None):
        self._dims = {k.lower(): int(v) for k, v in (dims or {}).items()}
        self._default = default

        for label, dim in list(self._dims.items()) + ([("*", default)] if default is not None else []):
            if dim < 2:
                raise CompileError(f"Fock dimension of {label} must be at least 2, got {dim}")

    @staticmethod
    def parse(specs: typing.Iterable[str]) -> FockDimensions:
        """
        @param specs: "label=N" strings, e.g. ["nand1.k=10", "*=8"]
        """
        dims = {}
        default = None
        for spec in specs:
            label, sep, value = spec.partition("=")
            if not sep or not value.strip().isdigit():
                raise CompileError(f"Malformed Fock dimension {spec!r}, expected label=N")

            if label.strip() == "*":
                default = int(value)
            else:
                dims[label.strip()] = int(value)

        return FockDimensions(dims, default)

    def dim_for(self, label: str) -> int:
        label = label.lower()
        if label in self._dims:
            return self._dims[label]

        if self._default is None:
            raise CompileError(f"Missing Fock dimension for mode {label} (use --fock {label}=N or --fock '*=N')")

        return self._default


@dataclasses.dataclass(frozen=True)
class Primitive:
    name: str
    generics: typing.Tuple[GenericDecl, ...]
    n_channels: int
    factory: typing.Callable[[typing.Dict[str, Number], str, FockDimensions], SLHTriplet]

    def build(self, values: typing.Dict[str, Number], label: str, fock: FockDimensions) -> SLHTriplet:
        return self.factory(values, label, fock)


def _real(name: str) -> GenericDecl:
    return GenericDecl(name, NumericKind.REAL)


PRIMITIVES: typing.Dict[str, Primitive] = {p.name: p for p in [
    Primitive("beamsplitter", (_real("theta"),), 2,
              lambda v, label, fock: components.beamsplitter(v["theta"])),
    Primitive("phase", (_real("phi"),), 1,
              lambda v, label, fock: components.phase(v["phi"])),
    Primitive("displace", (GenericDecl("alpha", NumericKind.COMPLEX),), 1,
              lambda v, label, fock: components.displace(v["alpha"])),
    Primitive("kerrcavity", (_real("delta"), _real("chi"), _real("kappa_1"), _real("kappa_2")), 2,
              lambda v, label, fock: components.kerr_cavity(v["delta"], v["chi"], v["kappa_1"], v["kappa_2"],
                                                            label, fock.dim_for(label))),
]}


@dataclasses.dataclass(frozen=True)
class LibraryEntry:
    """
    Exactly one of model, entity (with the file declaring it) or primitive is set.
    """
    name: str
    model: typing.Optional[CompiledModel] = None
    entity: typing.Optional[EntityDecl] = None
    design: typing.Optional[DesignFile] = None
    primitive: typing.Optional[Primitive] = None

    @property
    def n_channels(self) -> int:
        if self.model is not None:
            return self.model.triplet.n
        if self.entity is not None:
            return len(self.entity.in_ports)
        return self.primitive.n_channels


class DesignLibrary:

    def __init__(self, files: typing.Sequence[DesignFile], models: typing.Mapping[str, CompiledModel] = None):
        if not files:
            raise CompileError("No QHDL files given")

        self.files = list(files)
        self.models = {k.lower(): v for k, v in (models or {}).items()}

    @property
    def current(self) -> DesignFile:
        return self.files[0]

    def register_model(self, name: str, model: CompiledModel):
        logger.info(f"Registered compiled model {name} with {model.triplet.n} channels")
        self.models[name.lower()] = model

    def resolve(self, name: str, from_file: DesignFile = None) -> LibraryEntry:
        name = name.lower()
        if name in self.models:
            return LibraryEntry(name, model=self.models[name])

        from_file = from_file or self.current
        for design in [from_file] + [f for f in self.files if f is not from_file]:
            entity = design.entity(name)
            if entity is not None:
                return LibraryEntry(name, entity=entity, design=design)

        if name in PRIMITIVES:
            return LibraryEntry(name, primitive=PRIMITIVES[name])

        raise CompileError(f"Unknown component {name}: not a registered model, an entity of "
                           f"{', '.join(f.file_name for f in self.files)} or a primitive "
                           f"({', '.join(sorted(PRIMITIVES))})")

    def find_entity(self, name: str) -> typing.Tuple[DesignFile, EntityDecl]:
        for design in self.files:
            entity = design.entity(name)
            if entity is not None:
                return design, entity

        raise CompileError(f"No entity {name} in {', '.join(f.file_name for f in self.files)}")

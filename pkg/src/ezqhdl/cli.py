"""
Command-line workflow: parse -> synth -> compile -> sim -> reduce.

Exit codes: 0 success, 1 user error (diagnostic on stderr), 2 internal error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import typing

from ezqhdl.circuit.render import render_text
from ezqhdl.circuit.serialization import expression_to_json
from ezqhdl.dynamics.config import SimulationConfig, Method
from ezqhdl.dynamics.mcwf import EnsembleResult, run_trajectories
from ezqhdl.dynamics.master import integrate_master
from ezqhdl.dynamics.schedule import read_schedule, run_input_sequence
from ezqhdl.dynamics.state import parse_initial_state, parse_observables
from ezqhdl.dynamics.trace_io import write_trace, write_ensemble, read_trace, read_ensemble_traces
from ezqhdl.errors import EzQhdlError
from ezqhdl.qhdl.design import DesignFile
from ezqhdl.qhdl.expressions import parse_value, Number
from ezqhdl.qhdl.parser import parse_file
from ezqhdl.qhdl.validation import validate
from ezqhdl.reduction.binning import BinningSpec
from ezqhdl.reduction.reduced_model import reduce_traces
from ezqhdl.slh.model_io import read_model, write_model
from ezqhdl.synthesis.compiler import CircuitCompiler
from ezqhdl.synthesis.library import DesignLibrary, FockDimensions

logger = logging.getLogger(__name__)


class UsageError(EzQhdlError):
    pass


def _read_designs(paths: typing.Sequence[str]) -> typing.List[DesignFile]:
    designs = []
    for path in paths:
        try:
            designs.append(parse_file(path))
        except OSError as e:
            raise UsageError(f"{path}: cannot read ({e.strerror})")
    return designs


def _key_values(specs: typing.Sequence[str], what: str) -> typing.List[typing.Tuple[str, str]]:
    pairs = []
    for spec in specs:
        key, sep, value = spec.partition("=")
        if not sep or not key.strip():
            raise UsageError(f"Malformed {what} {spec!r}, expected name=value")
        pairs.append((key.strip(), value.strip()))
    return pairs


def _params(specs: typing.Sequence[str]) -> typing.Dict[str, Number]:
    return {k.lower(): parse_value(v) for k, v in _key_values(specs, "parameter")}


def _write_json(data: typing.Any, out: typing.Optional[str]):
    text = json.dumps(data, indent=2)
    if out is None:
        print(text)
    else:
        with open(out, "w") as f:
            f.write(text + "\n")


def cmd_parse(args) -> int:
    """
    Parses every file and validates every architecture it declares.
    """
    designs = _read_designs(args.files)
    for design in designs:
        for architecture in design.architectures:
            validate(design, architecture.entity, architecture.name)
        logger.info(f"{design.file_name}: {len(design.entities)} entities, "
                    f"{len(design.architectures)} architectures")

    if args.json:
        _write_json([d.to_json() for d in designs], args.out)

    return 0


def cmd_synth(args) -> int:
    designs = _read_designs(args.files)
    library = DesignLibrary(designs)
    design, entity = library.find_entity(args.entity)
    expression, _ = CircuitCompiler(library).expression_for(design, entity.name, args.arch)

    if args.format == "json":
        _write_json(expression_to_json(expression), args.out)
    else:
        text = f"{expression.to_text()}\n\n{render_text(expression)}"
        if args.out is None:
            print(text)
        else:
            with open(args.out, "w") as f:
                f.write(text + "\n")

    return 0


def cmd_compile(args) -> int:
    library = DesignLibrary(_read_designs(args.files))
    for name, path in _key_values(args.library, "library model"):
        library.register_model(name, read_model(path))

    compiler = CircuitCompiler(library, FockDimensions.parse(args.fock))
    result = compiler.compile(args.entity, args.arch, _params(args.param))

    unitarity, hermiticity = result.model.triplet.residuals()
    print(f"{args.out}: {result.model.triplet.n} channels, space {result.model.triplet.space}, "
          f"unitarity residual {unitarity:.3e}, hermiticity residual {hermiticity:.3e}")
    write_model(args.out, result.model)
    return 0


def _simulation_config(args, t_final: float) -> SimulationConfig:
    return SimulationConfig(t_final=t_final, dt=args.dt, sample_interval=args.sample, method=Method(args.method),
                            trajectories=args.traj, seed=args.seed, workers=args.workers)


def cmd_sim(args) -> int:
    model = read_model(args.model)
    space = model.triplet.expanded().space
    initial_state = parse_initial_state(space, args.init)
    observables = parse_observables(args.obs, space)

    if args.schedule is not None:
        schedule = read_schedule(args.schedule)
        config = _simulation_config(args, schedule.duration)
        result = run_input_sequence(model, schedule, config, initial_state, observables)
    else:
        if args.t_final is None:
            raise UsageError("sim needs --t-final or --schedule")
        config = _simulation_config(args, args.t_final)
        if config.method == Method.MASTER:
            result = integrate_master(model.triplet, initial_state, config, observables)
        else:
            result = run_trajectories(model.triplet, initial_state, config, observables)

    if isinstance(result, EnsembleResult):
        out = args.out or "trajectories"
        write_ensemble(out, result)
        print(f"{out}: {len(result.traces)} trajectories, {len(result.jumps)} jumps")
    else:
        out = args.out or "trace.csv"
        write_trace(out, result)
        print(f"{out}: {len(result)} samples")

    return 0


def _read_traces(paths: typing.Sequence[str]):
    traces = []
    for path in paths:
        if os.path.isdir(path):
            traces.extend(read_ensemble_traces(path))
        else:
            traces.append(read_trace(path))
    return traces


def cmd_reduce(args) -> int:
    traces = _read_traces(args.traces)
    alpha = parse_value(args.alpha) if args.alpha is not None else None
    spec = BinningSpec(args.mode_a.lower(), args.mode_b.lower(), args.bin_width, args.origin)
    reduced = reduce_traces(traces, spec, args.dt, alpha)

    write_model(args.out, reduced.open_model())
    if args.counts is not None:
        reduced.write_counts(args.counts)

    print(f"{args.out}: M={reduced.M} states, {reduced.jump.n} jump channels, |alpha|={abs(reduced.alpha):.6g}")
    return 0


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ezqhdl", description="QHDL compiler and quantum circuit simulator")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for progress, -vv for details")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("parse", help="parse and validate QHDL files")
    p.add_argument("files", nargs="+")
    p.add_argument("--json", action="store_true", help="dump the design trees as JSON")
    p.add_argument("--out", help="JSON output file (default: standard output)")
    p.set_defaults(handler=cmd_parse)

    p = commands.add_parser("synth", help="synthesize the circuit expression of an entity")
    p.add_argument("files", nargs="+")
    p.add_argument("--entity", required=True)
    p.add_argument("--arch")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out")
    p.set_defaults(handler=cmd_synth)

    p = commands.add_parser("compile", help="compile an entity into an SLH model file")
    p.add_argument("files", nargs="+")
    p.add_argument("--entity", required=True)
    p.add_argument("--arch")
    p.add_argument("--param", action="append", default=[], metavar="NAME=VALUE",
                   help="generic value; complex as re,im")
    p.add_argument("--fock", action="append", default=[], metavar="LABEL=N",
                   help="Fock dimension per mode, '*=N' for all others")
    p.add_argument("--library", action="append", default=[], metavar="NAME=MODEL.json",
                   help="use a compiled model for component NAME")
    p.add_argument("--out", default="model.json")
    p.set_defaults(handler=cmd_compile)

    p = commands.add_parser("sim", help="simulate a compiled model")
    p.add_argument("model")
    p.add_argument("--method", choices=[m.value for m in Method], default=Method.MASTER.value)
    p.add_argument("--schedule", help="JSON input schedule")
    p.add_argument("--t-final", type=float, help="duration of an unscheduled run")
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--sample", type=float, help="sample interval (default: dt)")
    p.add_argument("--traj", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int)
    p.add_argument("--obs", action="append", default=[], help="n:<mode>, a:<mode> or p:<index>")
    p.add_argument("--init", action="append", default=[], help="label=n Fock occupation (default vacuum)")
    p.add_argument("--out", help="trace file (master) or directory (mcwf)")
    p.set_defaults(handler=cmd_sim)

    p = commands.add_parser("reduce", help="reduce trajectory data to a Markov SLH model")
    p.add_argument("traces", nargs="+", help="trace files or trajectory directories")
    p.add_argument("--mode-a", default="nand1.k")
    p.add_argument("--mode-b", default="nand2.k")
    p.add_argument("--bin-width", type=float, default=1.0)
    p.add_argument("--origin", type=float, default=0.0)
    p.add_argument("--dt", type=float, help="sample spacing (default: inferred from the traces)")
    p.add_argument("--alpha", help="drive amplitude (default: fitted from SET/RESET data)")
    p.add_argument("--counts", help="directory for counts_<condition>.csv")
    p.add_argument("--out", default="reduced.json")
    p.set_defaults(handler=cmd_reduce)

    return parser


def main(argv: typing.Sequence[str] = None) -> int:
    args = _parser().parse_args(argv)
    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)]
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

    try:
        return args.handler(args)
    except EzQhdlError as e:
        print(str(e) if getattr(e, "position", None) else f"error: {e}", file=sys.stderr)
        return 1
    except Exception as e:
        logger.exception("Internal error")
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == '__main__':
    sys.exit(main())

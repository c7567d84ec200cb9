"""
CSV files for expectation traces and jump records. Floats are written with 17 significant digits.

trace:  t,<obs>_re,<obs>_im,...[,condition]
jumps:  trajectory,t,channel
"""
from __future__ import annotations

import csv
import logging
import os
import typing

import numpy as np

from ezqhdl.dynamics.config import ExpectationTrace
from ezqhdl.dynamics.mcwf import EnsembleResult
from ezqhdl.errors import ModelFormatError

logger = logging.getLogger(__name__)


def _float(value: float) -> str:
    return format(value, ".17g")


def write_trace(path: str, trace: ExpectationTrace):
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        header = ["t"] + [f"{name}{part}" for name in trace.names for part in ("_re", "_im")]
        if trace.conditions is not None:
            header.append("condition")
        writer.writerow(header)

        for k, t in enumerate(trace.times):
            row = [_float(t)]
            for v in trace.values[k]:
                row.extend([_float(v.real), _float(v.imag)])
            if trace.conditions is not None:
                row.append(trace.conditions[k])
            writer.writerow(row)

    logger.info(f"Wrote {len(trace)} samples to {path}")


def read_trace(path: str) -> ExpectationTrace:
    try:
        with open(path, "r", newline="") as f:
            rows = list(csv.reader(f))
    except OSError as e:
        raise ModelFormatError(f"{path}: cannot read trace ({e.strerror})")

    if not rows or rows[0][0] != "t":
        raise ModelFormatError(f"{path}: not a trace file, expected a header starting with t")

    header = rows[0]
    with_conditions = header[-1] == "condition"
    value_columns = header[1:-1] if with_conditions else header[1:]
    if len(value_columns) % 2 != 0 or \
            any(not (re.endswith("_re") and im.endswith("_im") and re[:-3] == im[:-3])
                for re, im in zip(value_columns[::2], value_columns[1::2])):
        raise ModelFormatError(f"{path}: trace columns must come in <name>_re,<name>_im pairs")

    names = [c[:-3] for c in value_columns[::2]]
    try:
        times = np.array([float(r[0]) for r in rows[1:]])
        values = np.array([[complex(float(r[1 + 2 * j]), float(r[2 + 2 * j])) for j in range(len(names))]
                           for r in rows[1:]], dtype=complex).reshape(len(rows) - 1, len(names))
    except (ValueError, IndexError) as e:
        raise ModelFormatError(f"{path}: malformed trace row ({e})")

    conditions = [r[-1] for r in rows[1:]] if with_conditions else None
    return ExpectationTrace(times, names, values, conditions)


def write_jumps(path: str, jumps: typing.Iterable[typing.Tuple[int, float, int]]):
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["trajectory", "t", "channel"])
        for trajectory, t, channel in jumps:
            writer.writerow([trajectory, _float(t), channel])


def trajectory_file_name(k: int) -> str:
    return f"trajectory_{k:04d}.csv"


def write_ensemble(directory: str, ensemble: EnsembleResult):
    """
    trajectory_NNNN.csv per trajectory, mean.csv and jumps.csv.
    """
    os.makedirs(directory, exist_ok=True)
    for k, trace in enumerate(ensemble.traces):
        write_trace(os.path.join(directory, trajectory_file_name(k)), trace)

    write_trace(os.path.join(directory, "mean.csv"), ensemble.mean_trace())
    write_jumps(os.path.join(directory, "jumps.csv"), ensemble.jumps)
    logger.info(f"Wrote {len(ensemble.traces)} trajectories to {directory}")


def read_ensemble_traces(directory: str) -> typing.List[ExpectationTrace]:
    """
    Every trajectory_NNNN.csv in the directory, in trajectory order.
    """
    try:
        names = sorted(n for n in os.listdir(directory) if n.startswith("trajectory_") and n.endswith(".csv"))
    except OSError as e:
        raise ModelFormatError(f"{directory}: cannot list trajectories ({e.strerror})")

    if not names:
        raise ModelFormatError(f"{directory}: no trajectory_NNNN.csv files")

    return [read_trace(os.path.join(directory, n)) for n in names]

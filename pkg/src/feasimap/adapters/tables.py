"""CSV encoding of run traces and grid tables."""

import csv
import io
from collections.abc import Iterable, Sequence
from pathlib import Path

import numpy as np

from ..core.model import RunTrace, TraceRow
from ..errors import InputError
from .fs_store import atomic_write_text


def fmt(value: float) -> str:
    """Shortest text that reloads to the same float."""
    return repr(float(value))


def trace_header(dimension: int, num_constraints: int) -> list[str]:
    return (
        ["iter"]
        + [f"x_{i}" for i in range(dimension)]
        + [f"g_{j}" for j in range(num_constraints)]
        + ["acq_value", "phase"]
    )


def write_rows(path: Path, header: Sequence[str], rows: Iterable[Sequence[object]]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    atomic_write_text(path, buf.getvalue())


def read_rows(path: Path) -> list[dict[str, str]]:
    if not path.exists():
        raise InputError(f"File not found: {path}")
    with path.open("r", newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


def save_trace_csv(trace: RunTrace, path: Path) -> None:
    if not trace.rows:
        write_rows(path, ["iter", "acq_value", "phase"], [])
        return
    n = len(trace.rows[0].x)
    num_constraints = len(trace.rows[0].g)
    rows = [
        [row.iteration]
        + [fmt(v) for v in row.x]
        + [fmt(v) for v in row.g]
        + ["" if row.acq_value is None else fmt(row.acq_value), row.phase]
        for row in trace.rows
    ]
    write_rows(path, trace_header(n, num_constraints), rows)


def load_trace_csv(path: Path, problem_id: str, method: str, rep_index: int) -> RunTrace:
    records = read_rows(path)
    trace = RunTrace(problem_id, method, rep_index)
    for record in records:
        xs = sorted((k for k in record if k.startswith("x_")), key=lambda k: int(k[2:]))
        gs = sorted((k for k in record if k.startswith("g_")), key=lambda k: int(k[2:]))
        acq = record.get("acq_value", "")
        phase = record.get("phase", "init")
        trace.rows.append(
            TraceRow(
                iteration=int(record["iter"]),
                x=np.array([float(record[k]) for k in xs]),
                g=np.array([float(record[k]) for k in gs]),
                acq_value=float(acq) if acq else None,
                phase="seq" if phase == "seq" else "init",
            )
        )
    return trace

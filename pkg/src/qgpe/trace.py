"""Per-iteration training traces and their CSV serialization.

One row per accepted optimizer iterate.  Full-domain runs use the sentinel
-1 for both the sweep and subdomain columns; domain-decomposition runs
label rows with the sweep index (0-based) and subdomain k in {1, 2, 3}.
Missing values (no Newton reference, no previous energy) are written as
nan.  Floats are emitted with ``repr`` so parsing the file reproduces the
numbers exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from .exceptions import DimensionError

TRACE_HEADER = "step,sweep,subdomain,energy,energy_error,l2_error,rel_energy_change,grad_norm,wall_time_s"


@dataclass
class TraceRow:
    step: int
    sweep: int
    subdomain: int
    energy: float
    energy_error: float
    l2_error: float
    rel_energy_change: float
    grad_norm: float
    wall_time_s: float


class TrainingTrace:
    """Append-only list of TraceRow with strictly increasing step indices."""

    def __init__(self, rows: list[TraceRow] | None = None):
        self.rows: list[TraceRow] = []
        self.meta: dict = {}   # side information (e.g. local termination reasons)
        for row in rows or []:
            self.append(row)

    def append(self, row: TraceRow) -> None:
        if self.rows and row.step <= self.rows[-1].step:
            raise ValueError(f"step {row.step} not greater than previous {self.rows[-1].step}")
        if not np.isfinite(row.energy):
            raise ValueError(f"non-finite energy {row.energy} at step {row.step}")
        self.rows.append(row)

    def __len__(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        return np.asarray([getattr(row, name) for row in self.rows], dtype=float)

    def energies(self) -> np.ndarray:
        return self.column("energy")

    def end_of_sweep_energies(self) -> np.ndarray:
        """Energy of the last recorded row of each sweep, in sweep order."""
        last: dict[int, float] = {}
        for row in self.rows:
            if row.sweep >= 0:
                last[row.sweep] = row.energy
        return np.asarray([last[s] for s in sorted(last)])


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def emit_trace(trace: TrainingTrace, path) -> None:
    """Write the trace as CSV (UTF-8, LF endings, exact round-trip floats)."""
    if len(trace) == 0:
        raise DimensionError("refusing to emit an empty trace")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(TRACE_HEADER + "\n")
        for row in trace.rows:
            fh.write(",".join(_fmt(getattr(row, f.name)) for f in fields(TraceRow)) + "\n")


def parse_trace(path) -> TrainingTrace:
    """Inverse of emit_trace."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        lines = [line.rstrip("\n") for line in fh if line.strip()]
    if not lines or lines[0] != TRACE_HEADER:
        raise ValueError(f"unrecognized trace header in {path}")
    trace = TrainingTrace()
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != 9:
            raise ValueError(f"malformed trace row: {line!r}")
        trace.append(
            TraceRow(
                step=int(parts[0]),
                sweep=int(parts[1]),
                subdomain=int(parts[2]),
                energy=float(parts[3]),
                energy_error=float(parts[4]),
                l2_error=float(parts[5]),
                rel_energy_change=float(parts[6]),
                grad_norm=float(parts[7]),
                wall_time_s=float(parts[8]),
            )
        )
    return trace

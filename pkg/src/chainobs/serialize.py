"""CSV and JSON writers for the run artifacts.

Floats are serialized with 17 significant digits, which is enough for a
binary64 value to survive a write/read round trip bit for bit. Matrices are
plain comma-separated values with no header; trajectory and average files
carry the headers the plotting tools expect.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .simulate import TimeAverage, Trajectory


def fmt(x: float) -> str:
    """Shortest-faithful decimal form of a float (17 significant digits)."""
    return format(float(x), ".17g")


def write_matrix_csv(path: Path, matrix: np.ndarray) -> None:
    m = np.atleast_2d(np.asarray(matrix, dtype=float))
    lines = [",".join(fmt(v) for v in row) for row in m]
    path.write_text("\n".join(lines) + "\n")


def read_matrix_csv(path: Path) -> np.ndarray:
    return np.atleast_2d(np.loadtxt(path, delimiter=",", dtype=float))


def trajectory_header(dim: int) -> str:
    return "t,row," + ",".join(f"c_{j}" for j in range(1, dim + 1))


def average_header(dim: int) -> str:
    return "T,row," + ",".join(f"avg_c_{j}" for j in range(1, dim + 1))


def write_trajectory_csv(path: Path, trajectory: Trajectory) -> None:
    """One line per (sample, output row), rows labeled 1..N+1."""
    times = trajectory.grid.times()
    n_rows, dim = trajectory.coefficient_rows.shape[1:]
    lines = [trajectory_header(dim)]
    for k, t in enumerate(times):
        for i in range(n_rows):
            values = ",".join(fmt(v) for v in trajectory.coefficient_rows[k, i])
            lines.append(f"{fmt(t)},{i + 1},{values}")
    path.write_text("\n".join(lines) + "\n")


def write_spatial_csv(path: Path, trajectory: Trajectory, spatial: np.ndarray) -> None:
    """Same column layout as the trajectory file, row label 's'."""
    times = trajectory.grid.times()
    dim = spatial.shape[1]
    lines = [trajectory_header(dim)]
    for k, t in enumerate(times):
        values = ",".join(fmt(v) for v in spatial[k])
        lines.append(f"{fmt(t)},s,{values}")
    path.write_text("\n".join(lines) + "\n")


def write_averages_csv(
    path: Path, averages: list[TimeAverage], row_errors: list[float]
) -> None:
    """Averaged rows per horizon, then one consensus summary line per row.

    Data lines carry row labels 1..N+1 for each horizon in order. Summary
    lines (row label err_i for observer row i) repeat the final horizon,
    put the row's distance to the plant row in the first value column, and
    leave the rest empty.
    """
    n_rows, dim = averages[0].averaged_rows.shape
    lines = [average_header(dim)]
    for avg in averages:
        for i in range(n_rows):
            values = ",".join(fmt(v) for v in avg.averaged_rows[i])
            lines.append(f"{fmt(avg.horizon)},{i + 1},{values}")
    final = averages[-1]
    for i, err in enumerate(row_errors, start=2):
        padding = "," * (dim - 1)
        lines.append(f"{fmt(final.horizon)},err_{i},{fmt(err)}{padding}")
    path.write_text("\n".join(lines) + "\n")


def write_report_json(path: Path, report: dict) -> None:
    path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")

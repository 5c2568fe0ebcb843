"""Bit-specified file formats for run directories.

All files are UTF-8 CSV with mandatory headers, '.' decimal separator,
and LF line endings.  Floats are written with Python's shortest
round-trip representation, so reading a file back reproduces the
original values bitwise; identical inputs therefore produce identical
bytes.
"""

from __future__ import annotations

import csv
import os

import numpy as np

from .config import RunConfig
from .dynamics import ControlSignal, TargetPhase, Trajectory
from .errors import ConfigurationError
from .grids import GridSpec, PhysicalField
from .optimizer import OptimizeReport

MANIFEST_NAME = "manifest.txt"

CONTROL_HEADER = ["t", "u"]
COST_HISTORY_HEADER = ["iter", "terminal", "running", "total", "delta"]
DENSITY_HEADER = ["theta", "eta", "rho"]
PARTICLES_HEADER = ["theta", "eta"]
INCREMENT_HEADER = ["delta_formula", "delta_direct", "rel_gap"]
COMPARE_HEADER = ["pde_terminal", "empirical_terminal", "abs_diff",
                  "stderr", "n_particles"]
WFIELD_HEADER = ["theta", "eta", "w"]
MEANFIELD_HEADER = ["max_abs_w", "guard_radius", "guard_limit", "evaluable"]
TARGET_HEADER = ["eta", "theta_target"]


def fmt(value) -> str:
    """Shortest round-trip text for a number (ints stay integral)."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def write_rows(path: str, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def _read_rows(path: str, header: list[str]) -> list[list[str]]:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            got = next(reader, None)
            if got != header:
                raise ConfigurationError(
                    f"{path}: expected header {','.join(header)}, "
                    f"got {','.join(got) if got else '<empty>'}")
            return [row for row in reader if row]
    except OSError as exc:
        raise ConfigurationError(f"cannot read table {path}: {exc}")


def _parse_floats(path: str, row: list[str], width: int) -> list[float]:
    if len(row) != width:
        raise ConfigurationError(
            f"{path}: expected {width} columns, got {len(row)}")
    try:
        return [float(cell) for cell in row]
    except ValueError:
        raise ConfigurationError(
            f"{path}: non-numeric cell in row {row!r}") from None


def time_tag(t: float) -> str:
    """Compact filesystem tag for a snapshot time (6 -> '6', 2.5 -> '2.5')."""
    return format(float(t), "g")


def snapshot_times(grid: GridSpec) -> tuple[float, float, float]:
    return (0.0, 0.5 * grid.horizon, grid.horizon)


# ---------------------------------------------------------------- writers

def write_control(out_dir: str, u: ControlSignal) -> str:
    path = os.path.join(out_dir, "control.csv")
    write_rows(path, CONTROL_HEADER, zip(u.grid.times, u.samples))
    return path


def write_cost_history(out_dir: str, report: OptimizeReport) -> str:
    path = os.path.join(out_dir, "cost_history.csv")
    rows = [(r.index, r.cost.terminal, r.cost.running, r.cost.total, r.delta)
            for r in report.iterations]
    write_rows(path, COST_HISTORY_HEADER, rows)
    return path


def _field_rows(values: np.ndarray, grid: GridSpec):
    for j in range(grid.n_eta):  # eta outer, row-major
        eta = grid.eta[j]
        for m in range(grid.n_modes):
            yield grid.theta[m], eta, values[j, m]


def write_density(out_dir: str, t: float, field: PhysicalField) -> str:
    path = os.path.join(out_dir, f"density_t{time_tag(t)}.csv")
    write_rows(path, DENSITY_HEADER, _field_rows(field.values, field.grid))
    return path


def write_density_snapshots(out_dir: str, traj: Trajectory) -> list[str]:
    from .grids import to_physical
    return [write_density(out_dir, t, to_physical(traj.field_at(t)))
            for t in snapshot_times(traj.grid)]


def write_wfield(out_dir: str, t: float, values: np.ndarray,
                 grid: GridSpec) -> str:
    path = os.path.join(out_dir, f"wfield_t{time_tag(t)}.csv")
    write_rows(path, WFIELD_HEADER, _field_rows(values, grid))
    return path


def write_particles(out_dir: str, ensemble) -> str:
    path = os.path.join(out_dir, "particles.csv")
    write_rows(path, PARTICLES_HEADER, zip(ensemble.thetas, ensemble.etas))
    return path


def write_increment_report(out_dir: str, delta_formula: float,
                           delta_direct: float, rel_gap: float) -> str:
    path = os.path.join(out_dir, "increment_report.csv")
    write_rows(path, INCREMENT_HEADER, [(delta_formula, delta_direct, rel_gap)])
    return path


def write_compare_report(out_dir: str, pde_terminal: float,
                         empirical_terminal: float, stderr: float,
                         n_particles: int) -> str:
    path = os.path.join(out_dir, "compare_report.csv")
    row = (pde_terminal, empirical_terminal,
           abs(pde_terminal - empirical_terminal), stderr, n_particles)
    write_rows(path, COMPARE_HEADER, [row])
    return path


def write_meanfield_report(out_dir: str, max_abs_w: float, guard_radius: float,
                           guard_limit: float, evaluable: bool) -> str:
    path = os.path.join(out_dir, "meanfield_report.csv")
    write_rows(path, MEANFIELD_HEADER,
               [(max_abs_w, guard_radius, guard_limit, evaluable)])
    return path


def write_manifest(out_dir: str, config: RunConfig, subcommand: str,
                   version: str) -> str:
    path = os.path.join(out_dir, MANIFEST_NAME)
    lines = [f"subcommand={subcommand}", f"version={version}"]
    mapping = config.to_mapping()
    lines.extend(f"{key}={mapping[key]}" for key in sorted(mapping))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


# ---------------------------------------------------------------- readers

def read_control(path: str, grid: GridSpec) -> ControlSignal:
    rows = _read_rows(path, CONTROL_HEADER)
    if len(rows) != grid.n_steps + 1:
        raise ConfigurationError(
            f"{path}: expected {grid.n_steps + 1} samples, got {len(rows)}")
    data = np.array([_parse_floats(path, row, 2) for row in rows])
    if not np.allclose(data[:, 0], grid.times, rtol=0.0, atol=1e-9):
        raise ConfigurationError(
            f"{path}: time column does not match the grid's time nodes")
    return ControlSignal(grid, data[:, 1].copy())


def read_density(path: str, grid: GridSpec) -> PhysicalField:
    rows = _read_rows(path, DENSITY_HEADER)
    expected = grid.n_eta * grid.n_modes
    if len(rows) != expected:
        raise ConfigurationError(
            f"{path}: expected {expected} rows for a "
            f"{grid.n_eta}x{grid.n_modes} field, got {len(rows)}")
    data = np.array([_parse_floats(path, row, 3) for row in rows])
    theta = data[:, 0].reshape(grid.n_eta, grid.n_modes)
    eta = data[:, 1].reshape(grid.n_eta, grid.n_modes)
    if not np.allclose(theta, grid.theta[None, :], rtol=0.0, atol=1e-9):
        raise ConfigurationError(
            f"{path}: theta column does not match the grid's theta nodes")
    if not np.allclose(eta, grid.eta[:, None], rtol=0.0, atol=1e-9):
        raise ConfigurationError(
            f"{path}: eta column does not match the grid's eta nodes")
    return PhysicalField(grid, data[:, 2].reshape(grid.n_eta, grid.n_modes))


def read_target(path: str, grid: GridSpec) -> TargetPhase:
    rows = _read_rows(path, TARGET_HEADER)
    if len(rows) != grid.n_eta:
        raise ConfigurationError(
            f"{path}: expected {grid.n_eta} eta rows, got {len(rows)}")
    data = np.array([_parse_floats(path, row, 2) for row in rows])
    if not np.allclose(data[:, 0], grid.eta, rtol=0.0, atol=1e-9):
        raise ConfigurationError(
            f"{path}: eta column does not match the grid's eta nodes")
    return TargetPhase(grid, data[:, 1].copy())


def read_particles(path: str):
    from .particles import ParticleEnsemble
    rows = _read_rows(path, PARTICLES_HEADER)
    if not rows:
        raise ConfigurationError(f"{path}: no particle rows")
    data = np.array([_parse_floats(path, row, 2) for row in rows])
    return ParticleEnsemble(data[:, 0].copy(), data[:, 1].copy())

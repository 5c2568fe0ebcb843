"""Command-line surface: subcommands over run directories.

Every run resolves its configuration (preset, config file, overrides),
validates it, creates the output directory, writes a manifest, computes,
and writes the subcommand's files.  Exit codes: 0 success, 2 for
configuration problems (reported as one line on stderr), 1 for numeric
failures.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__, runio
from .config import RunConfig, parse_config_file, parse_overrides, resolve_config
from .costs import (ensemble_cost, increment_via_formula, meanfield_feedback,
                    terminal_cost)
from .densities import builtin_density, normalize_density
from .dynamics import (RK4_IMAG_STABILITY, ControlSignal, TargetPhase,
                       solve_backward, solve_forward, terminal_dual)
from .errors import ConfigurationError, NumericsError
from .grids import GridSpec, PhysicalField, SpectralField, to_spectral
from .optimizer import ProblemSpec, optimize
from .particles import empirical_terminal_cost, sample_initial, simulate

SUBCOMMANDS = ("solve-forward", "optimize", "simulate-particles",
               "compare", "increment-check", "export-meanfield")


# ------------------------------------------------------------- builders

def _physical_density(config: RunConfig, grid: GridSpec) -> PhysicalField:
    name = config.initial_density
    if name.startswith("table:"):
        return runio.read_density(name.partition(":")[2], grid)
    return builtin_density(name, grid)


def _spectral_density(config: RunConfig, grid: GridSpec) -> SpectralField:
    raw = _physical_density(config, grid)
    if config.normalize:
        return normalize_density(raw)
    return to_spectral(raw)


def _target(config: RunConfig, grid: GridSpec) -> TargetPhase:
    kind, _, tail = config.target.partition(":")
    if kind == "constant":
        return TargetPhase.constant(grid, float(tail))
    return runio.read_target(tail, grid)


def _control(config: RunConfig, grid: GridSpec) -> ControlSignal:
    if config.control == "zero":
        return ControlSignal.zero(grid)
    return runio.read_control(config.control.partition(":")[2], grid)


# ---------------------------------------------------------- subcommands

def _run_solve_forward(config: RunConfig, out_dir: str) -> None:
    grid = config.grid()
    rho0 = _spectral_density(config, grid)
    u = _control(config, grid)
    _emit_manifest(config, out_dir, "solve-forward")
    traj = solve_forward(rho0, u, grid, stride=config.storage_stride)
    runio.write_density_snapshots(out_dir, traj)


def _run_optimize(config: RunConfig, out_dir: str) -> None:
    grid = config.grid()
    spec = ProblemSpec(grid=grid, rho0=_spectral_density(config, grid),
                       target=_target(config, grid), alpha=config.alpha,
                       epsilon=config.epsilon, max_iters=config.max_iters,
                       initial_guess=_control(config, grid),
                       stride=config.storage_stride)
    _emit_manifest(config, out_dir, "optimize")
    report = optimize(spec)
    runio.write_control(out_dir, report.final_control)
    runio.write_cost_history(out_dir, report)
    traj = report.final_trajectory
    if traj is None:
        traj = solve_forward(spec.rho0, report.final_control, grid,
                             stride=spec.stride)
    runio.write_density_snapshots(out_dir, traj)


def _run_simulate_particles(config: RunConfig, out_dir: str) -> None:
    grid = config.grid()
    density = _physical_density(config, grid)
    u = _control(config, grid)
    ensemble = sample_initial(density, config.particles_n, config.seed)
    _emit_manifest(config, out_dir, "simulate-particles")
    final = simulate(ensemble, u, grid.dt)
    runio.write_particles(out_dir, final)


def _run_compare(config: RunConfig, out_dir: str) -> None:
    grid = config.grid()
    density = _physical_density(config, grid)
    target = _target(config, grid)
    u = _control(config, grid)
    rho0 = normalize_density(density) if config.normalize else to_spectral(density)
    ensemble = sample_initial(density, config.particles_n, config.seed)
    _emit_manifest(config, out_dir, "compare")
    traj = solve_forward(rho0, u, grid, stride=config.storage_stride)
    pde_terminal = terminal_cost(traj.final, target)
    final = simulate(ensemble, u, grid.dt)
    empirical, stderr = empirical_terminal_cost(final, target)
    runio.write_compare_report(out_dir, pde_terminal, empirical, stderr,
                               len(final))


def _run_increment_check(config: RunConfig, out_dir: str) -> None:
    grid = config.grid()
    rho0 = _spectral_density(config, grid)
    target = _target(config, grid)
    u_old = ControlSignal.zero(grid)
    u_new = ControlSignal.from_function(
        grid, lambda t: 0.2 * np.sin(2.0 * np.pi * t / grid.horizon))
    _emit_manifest(config, out_dir, "increment-check")
    stride = config.storage_stride
    xi = solve_backward(terminal_dual(target, grid), u_old, grid, stride=stride)
    mu_new = solve_forward(rho0, u_new, grid, stride=stride)
    delta_formula = increment_via_formula(mu_new, xi, u_new, u_old,
                                          config.alpha)
    cost_new = ensemble_cost(u_new, rho0, target, config.alpha, grid,
                             stride=stride)
    cost_old = ensemble_cost(u_old, rho0, target, config.alpha, grid,
                             stride=stride)
    delta_direct = cost_new.total - cost_old.total
    rel_gap = abs(delta_formula - delta_direct) / abs(delta_direct)
    runio.write_increment_report(out_dir, delta_formula, delta_direct, rel_gap)


def _run_export_meanfield(config: RunConfig, out_dir: str) -> None:
    grid = config.grid()
    target = _target(config, grid)
    u_bar = _control(config, grid)
    _emit_manifest(config, out_dir, "export-meanfield")
    xi = solve_backward(terminal_dual(target, grid), u_bar, grid,
                        stride=config.storage_stride)
    w = meanfield_feedback(xi, config.alpha)
    for t in runio.snapshot_times(grid):
        runio.write_wfield(out_dir, t, w.values_at(t), grid)
    max_abs_w = w.max_abs()
    eta_amp = max(abs(grid.eta_min), abs(grid.eta_max))
    guard_radius = grid.dt * grid.n_modes * (2.0 + 2.0 * (max_abs_w + eta_amp)) / 2.0
    runio.write_meanfield_report(out_dir, max_abs_w, guard_radius,
                                 RK4_IMAG_STABILITY,
                                 guard_radius <= RK4_IMAG_STABILITY)


_HANDLERS = {
    "solve-forward": _run_solve_forward,
    "optimize": _run_optimize,
    "simulate-particles": _run_simulate_particles,
    "compare": _run_compare,
    "increment-check": _run_increment_check,
    "export-meanfield": _run_export_meanfield,
}


def _emit_manifest(config: RunConfig, out_dir: str, subcommand: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    runio.write_manifest(out_dir, config, subcommand, __version__)


# ------------------------------------------------------------- plumbing

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thetasync",
        description="Optimal ensemble control of theta-neuron populations.")
    parser.add_argument("--version", action="version",
                        version=f"thetasync {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", default=None,
                       help="flat key=value config file")
        p.add_argument("--preset", choices=("desk", "paper"), default=None)
        p.add_argument("--out", default="thetasync_run",
                       help="output directory (default: thetasync_run)")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       dest="overrides", help="override one config key")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        file_values = parse_config_file(args.config) if args.config else {}
        overrides = parse_overrides(args.overrides)
        config = resolve_config(preset=args.preset, file_values=file_values,
                                overrides=overrides, seed=args.seed)
        _HANDLERS[args.subcommand](config, args.out)
    except ConfigurationError as exc:
        print(f"thetasync: configuration error: {_one_line(exc)}",
              file=sys.stderr)
        return 2
    except NumericsError as exc:
        print(f"thetasync: numeric failure: {_one_line(exc)}", file=sys.stderr)
        return 1
    return 0


def _one_line(exc: Exception) -> str:
    return " ".join(str(exc).split())


if __name__ == "__main__":
    sys.exit(main())

"""End-to-end acceptance checks, one test per shipped guarantee.

Each test exercises the reference desk-size problem (128 modes, 51
drive levels, horizon 6, 1200 steps) or an explicitly stated variant,
and pins the tolerance it enforces.  Together they are the release
gate for the solver.
"""

import time

import numpy as np
import pytest

from conftest import make_grid, paper_rho0
from oracle_pushforward import pushforward_costs_p2
from thetasync import (ControlSignal, GridSpec, PhysicalField, TargetPhase,
                       ConfigurationError, empirical_terminal_cost,
                       ensemble_cost, feedback_control, hamiltonian,
                       increment_via_formula, meanfield_cost,
                       meanfield_feedback, normalize_density, sample_initial,
                       simulate, solve_backward, solve_forward, spike_period,
                       terminal_cost, terminal_dual, to_physical, to_spectral,
                       total_mass)
from thetasync.densities import paper_cossin2_clipped
from thetasync.dynamics import mass_drift


def reference_control(grid):
    """One full period of a gentle sine, the standard probe control."""
    return ControlSignal.from_function(
        grid, lambda t: 0.2 * np.sin(2.0 * np.pi * t / grid.horizon))


def test_descent_is_monotone_on_the_reference_problem(desk_run):
    """Every accepted step strictly lowers the cost until the
    increment tolerance stops the run, and the whole descent stays
    within a five-minute single-threaded budget."""
    report, seconds = desk_run
    totals = report.totals
    assert len(totals) >= 2
    for before, after in zip(totals, totals[1:]):
        assert after < before
    assert report.stop_reason == "converged"
    assert totals[-1] < totals[0]
    assert seconds < 300.0


def test_predicted_increment_matches_direct_cost_difference(desk_grid):
    """The quadrature of Hamiltonian differences reproduces the direct
    cost difference to 1e-3 on the reference grid, and the residual
    shrinks at second order under joint refinement."""
    target = TargetPhase.constant(desk_grid, np.pi)
    rho0 = paper_rho0(desk_grid)
    resting = ControlSignal.zero(desk_grid)
    probe = reference_control(desk_grid)
    dual = solve_backward(terminal_dual(target, desk_grid), resting, desk_grid)
    moved = solve_forward(rho0, probe, desk_grid)
    formula = increment_via_formula(moved, dual, probe, resting, 1.0)
    direct = (ensemble_cost(probe, rho0, target, 1.0, desk_grid).total
              - ensemble_cost(resting, rho0, target, 1.0, desk_grid).total)
    assert abs(formula - direct) / abs(direct) <= 1e-3

    gaps = []
    for n_modes, n_steps in ((64, 400), (128, 800), (256, 1600)):
        grid = GridSpec(n_modes=n_modes, n_eta=11, eta_min=0.0, eta_max=1.0,
                        horizon=6.0, n_steps=n_steps)
        tgt = TargetPhase.constant(grid, np.pi)
        r0 = paper_rho0(grid)
        u0 = ControlSignal.zero(grid)
        u1 = reference_control(grid)
        xi = solve_backward(terminal_dual(tgt, grid), u0, grid)
        mu = solve_forward(r0, u1, grid)
        f = increment_via_formula(mu, xi, u1, u0, 1.0)
        d = (ensemble_cost(u1, r0, tgt, 1.0, grid).total
             - ensemble_cost(u0, r0, tgt, 1.0, grid).total)
        gaps.append(abs(f - d) / abs(d))
    assert gaps == pytest.approx(
        [4.829097e-06, 1.208973e-06, 3.023589e-07], rel=1e-3)
    orders = [np.log2(a / b) for a, b in zip(gaps, gaps[1:])]
    # Second-order convergence observed on a finite ladder: the rate
    # approaches 2 from below (measured 1.998, 1.999), so the assertion
    # allows a 2.5 percent finite-resolution margin.
    for order in orders:
        assert order >= 1.95


def test_mass_is_conserved_along_the_optimized_run(desk_report):
    """Per-slice mass is exact to 1e-12 relative and the total stays
    within 1e-10 of one at every stored time of the optimized run."""
    trajectory = desk_report.final_trajectory
    slice_drift, total_drift = mass_drift(trajectory)
    assert slice_drift <= 1e-12
    assert total_drift <= 1e-10
    for stored in trajectory.fields:
        assert abs(total_mass(stored) - 1.0) <= 1e-10


def test_forward_then_backward_recovers_the_initial_density(desk_grid):
    """Marching to the horizon and back under the same control returns
    the initial density within 1e-6 in the sup norm."""
    rho0 = paper_rho0(desk_grid)
    probe = reference_control(desk_grid)
    forward = solve_forward(rho0, probe, desk_grid)
    back = solve_backward(forward.final, probe, desk_grid)
    residual = np.max(np.abs(to_physical(back.initial).values
                             - to_physical(rho0).values))
    assert residual <= 1e-6


def test_unit_drive_slice_rotates_rigidly(desk_grid):
    """With the control off, the slice at unit drive translates at
    constant speed two: the stored profiles match the shifted initial
    profile within 1e-6 in the sup norm at every stored time."""
    rho0 = paper_rho0(desk_grid)
    trajectory = solve_forward(rho0, ControlSignal.zero(desk_grid), desk_grid)
    theta = desk_grid.theta
    worst = 0.0
    for stored, t in zip(trajectory.fields, trajectory.stored_times):
        profile = to_physical(stored).values[-1]
        shifted = theta - 2.0 * t
        exact = (2.0 + 3.0 * np.cos(2.0 * shifted)
                 - 2.0 * np.sin(2.0 * shifted)) / (2.0 * np.pi)
        worst = max(worst, float(np.max(np.abs(profile - exact))))
    assert worst <= 1e-6


def test_spiking_period_scales_as_inverse_root_drive():
    """A single neuron at constant drive eta > 0 spikes with period
    pi / sqrt(eta), reproduced to 0.1 percent at dt = 1e-4."""
    for eta in (0.25, 0.5, 1.0, 2.0, 4.0):
        period = spike_period(eta, dt=1e-4)
        assert abs(period * np.sqrt(eta) - np.pi) <= 1e-3 * np.pi


def test_particles_and_field_agree_on_the_terminal_cost(desk_grid,
                                                        desk_report):
    """Two hundred thousand particles sampled from the clipped standard
    density and steered by the optimized control land within three
    standard errors of the field prediction, in under two minutes."""
    start = time.perf_counter()
    target = TargetPhase.constant(desk_grid, np.pi)
    density = paper_cossin2_clipped(desk_grid)
    field_run = solve_forward(normalize_density(density),
                              desk_report.final_control, desk_grid)
    field_value = terminal_cost(field_run.final, target)

    ensemble = sample_initial(density, 200_000, seed=0)
    final = simulate(ensemble, desk_report.final_control, desk_grid.dt)
    empirical, stderr = empirical_terminal_cost(final, target)

    assert abs(empirical - field_value) <= 3.0 * stderr
    assert time.perf_counter() - start < 120.0


def test_feedback_control_maximizes_the_stage_hamiltonian():
    """Across one hundred random (density, dual, weight) instances the
    Hamiltonian at the feedback value is never below its value one
    part in a thousand to either side."""
    grid = make_grid()
    for seed in range(100):
        rng = np.random.Generator(np.random.Philox(seed))
        mu = to_spectral(PhysicalField(
            grid, 1.0 + 0.3 * rng.normal(size=grid.field_shape())))
        xi = to_spectral(PhysicalField(
            grid, rng.normal(size=grid.field_shape())))
        alpha = float(rng.uniform(0.3, 3.0))
        best = feedback_control(mu, xi, alpha)
        h_star = hamiltonian(mu, xi, best, alpha)
        for delta in (1e-3, -1e-3):
            assert hamiltonian(mu, xi, best + delta, alpha) <= h_star


def test_distributed_feedback_beats_no_control_for_the_field_problem(
        desk_grid):
    """The dual feedback field improves on zero control in the
    running-cost problem.  On the reference grid the feedback is too
    violent for the spectral route, whose stability guard refuses it,
    so the costs are arbitrated by the characteristics oracle."""
    target = TargetPhase.constant(desk_grid, np.pi)
    rho0 = paper_rho0(desk_grid)
    dual = solve_backward(terminal_dual(target, desk_grid),
                          ControlSignal.zero(desk_grid), desk_grid, stride=2)
    w = meanfield_feedback(dual, 1.0)
    with pytest.raises(ConfigurationError):
        meanfield_cost(w, rho0, target, 1.0, desk_grid)

    def rho0_fn(theta, eta):
        return (2.0 + 3.0 * np.cos(2.0 * theta)
                - 2.0 * np.sin(2.0 * theta)) * eta / (2.0 * np.pi)

    with_w, without = pushforward_costs_p2(w, rho0_fn, target.values, 1.0,
                                           desk_grid, n_theta0=1024, dt=1e-3)
    assert with_w[2] == pytest.approx(0.56450433, rel=1e-5)
    assert without[2] == pytest.approx(1.12600799, rel=1e-5)
    assert with_w[2] < without[2]
    # The oracle's uncontrolled cost agrees with the spectral baseline.
    baseline = ensemble_cost(ControlSignal.zero(desk_grid), rho0, target,
                             1.0, desk_grid).total
    assert abs(without[2] - baseline) / baseline < 1e-6

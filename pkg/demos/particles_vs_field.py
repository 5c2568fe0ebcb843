"""Cross-validate the field solver with a cloud of real neurons.

The continuity-equation solver predicts where the population density
goes; a direct simulation of individual theta neurons says where
actual neurons go.  If the mean-field picture is right, the empirical
terminal cost of a large sampled ensemble must agree with the field
prediction to within sampling noise.

This script optimizes a control on the field side, then hands that
same control to fifty thousand independently sampled neurons and
compares the two answers.
"""

import numpy as np

from thetasync import (ControlSignal, GridSpec, ProblemSpec, TargetPhase,
                       empirical_terminal_cost, normalize_density, optimize,
                       sample_initial, simulate, solve_forward, terminal_cost)
from thetasync.densities import paper_cossin2_clipped

grid = GridSpec(n_modes=64, n_eta=21, eta_min=0.0, eta_max=1.0,
                horizon=6.0, n_steps=600)
target = TargetPhase.constant(grid, np.pi)
density = paper_cossin2_clipped(grid)  # nonnegative, so sampleable
rho0 = normalize_density(density)

print("optimizing a common control on the field side ...")
report = optimize(ProblemSpec(grid=grid, rho0=rho0, target=target,
                              alpha=1.0, epsilon=0.01, max_iters=50,
                              initial_guess=ControlSignal.zero(grid)))
u = report.final_control
print(f"done: {report.stop_reason}, final cost {report.totals[-1]:.6f}")

# Field route: march the density and read the terminal mismatch.
field_run = solve_forward(rho0, u, grid)
field_value = terminal_cost(field_run.final, target)

# Particle route: draw neurons from the same density, integrate each
# one under the same control, and average the mismatch over the cloud.
n = 50_000
ensemble = sample_initial(density, n, seed=7)
final = simulate(ensemble, u, grid.dt)
empirical, stderr = empirical_terminal_cost(final, target)

gap = abs(empirical - field_value)
print(f"\nterminal mismatch, field:     {field_value:.6f}")
print(f"terminal mismatch, particles: {empirical:.6f}  "
      f"(n = {n}, stderr = {stderr:.2e})")
print(f"difference = {gap:.2e} = {gap / stderr:.2f} standard errors")
print("consistent" if gap <= 3.0 * stderr else "NOT consistent")

"""Distributed feedback: give every neuron its own control.

Instead of one shared signal u(t), the second problem lets the control
w(theta, eta, t) depend on where each neuron sits.  The dual field of
the uncontrolled flow hands us that feedback in closed form: w is the
dual times the phase sensitivity (1 + cos theta), divided by alpha.

On a short horizon the spectral solver can evaluate the controlled
flow directly, and the feedback beats doing nothing by a wide margin.
The same construction on long horizons concentrates the density so
hard that the spectral route becomes unstable; the solver's stability
guard refuses it up front rather than integrating garbage, and this
script shows that refusal too.
"""

import warnings

import numpy as np

from thetasync import (ConfigurationError, ControlSignal, GridSpec,
                       MeanFieldControl, TargetPhase, meanfield_cost,
                       meanfield_feedback, normalize_density, solve_backward,
                       terminal_dual)
from thetasync.densities import paper_cossin2

with warnings.catch_warnings():
    warnings.simplefilter("ignore")  # the standard profile is signed

    grid = GridSpec(n_modes=128, n_eta=51, eta_min=0.0, eta_max=1.0,
                    horizon=1.0, n_steps=2400)
    target = TargetPhase.constant(grid, np.pi)
    rho0 = normalize_density(paper_cossin2(grid))

    print("transporting the dual field backward ...")
    dual = solve_backward(terminal_dual(target, grid),
                          ControlSignal.zero(grid), grid, stride=2)
    w = meanfield_feedback(dual, 1.0)
    print(f"feedback field amplitude: max|w| = {w.max_abs():.3f}")

    j_fb = meanfield_cost(w, rho0, target, 1.0, grid)
    j_off = meanfield_cost(MeanFieldControl.zero(grid, stride=2), rho0,
                           target, 1.0, grid)

print(f"\ncost with feedback: {j_fb.total:.6f} "
      f"(terminal {j_fb.terminal:.6f} + running {j_fb.running:.6f})")
print(f"cost with w = 0:    {j_off.total:.6f}")
print(f"improvement:        {j_off.total - j_fb.total:.6f} "
      f"({100.0 * (1.0 - j_fb.total / j_off.total):.1f} percent)")

# The long-horizon version of the same feedback is too violent for the
# grid route; the stability guard rejects it before integrating.
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    big = GridSpec(n_modes=128, n_eta=51, eta_min=0.0, eta_max=1.0,
                   horizon=6.0, n_steps=1200)
    big_dual = solve_backward(terminal_dual(TargetPhase.constant(big, np.pi), big),
                              ControlSignal.zero(big), big, stride=2)
    big_w = meanfield_feedback(big_dual, 1.0)
    print(f"\nhorizon 6 feedback amplitude: max|w| = {big_w.max_abs():.3f}")
    try:
        meanfield_cost(big_w, normalize_density(paper_cossin2(big)),
                       TargetPhase.constant(big, np.pi), 1.0, big)
    except ConfigurationError as err:
        print(f"guard refused the spectral route, as designed:\n  {err}")

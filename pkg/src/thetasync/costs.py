"""Cost functionals, the control Hamiltonian, and the exact increment.

The ensemble problem penalizes the terminal phase mismatch
1 - cos(theta - target(eta)) plus the quadratic control energy
(alpha/2) * int u^2 dt.  The mean-field variant replaces the scalar
control by a field w(theta, eta) and weighs its energy against the
current density, (alpha/2) * int int w^2 dmu_t dt.

The Hamiltonian pairing underlying both,

    H(mu, xi, u) = u * <xi * (1 + cos theta), mu> - (alpha/2) * u^2,

gives the cost change between two controls without differencing two
nearly equal numbers: integrating H along the new control's trajectory
against the old control's dual yields the increment exactly (in the
continuum; discretely to quadrature order).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import (ControlSignal, TargetPhase, Trajectory, pairing,
                       solve_forward)
from .errors import ConfigurationError
from .grids import GridSpec, SpectralField, integrate, to_physical


@dataclass(frozen=True)
class CostBreakdown:
    """Terminal + running decomposition of a cost value.

    ``problem`` is "ensemble" (scalar control) or "meanfield" (control
    field).  ``total`` always equals ``terminal + running``; the running
    part is nonnegative whenever the underlying density is.
    """

    terminal: float
    running: float
    problem: str

    @property
    def total(self) -> float:
        return self.terminal + self.running


def _trapezoid(samples: np.ndarray, dt: float) -> float:
    """Uniform trapezoid rule with a fixed left-to-right reduction."""
    if len(samples) == 1:
        return 0.0
    return float(dt * (np.sum(samples[1:-1]) + 0.5 * (samples[0] + samples[-1])))


def terminal_mismatch(theta, target_phase):
    """Pointwise mismatch 1 - cos(theta - target), in [0, 2]."""
    return 1.0 - np.cos(np.asarray(theta) - np.asarray(target_phase))


def terminal_cost(mu_terminal: SpectralField, target: TargetPhase) -> float:
    """Integral of the mismatch against the terminal density."""
    grid = mu_terminal.grid
    if target.grid != grid:
        raise ConfigurationError("target grid does not match field grid")
    weight = terminal_mismatch(grid.theta[None, :], target.values[:, None])
    return integrate(mu_terminal, weight)


def control_energy(u: ControlSignal, alpha: float) -> float:
    """(alpha/2) * int_0^T u(t)^2 dt by the trapezoid rule."""
    if not alpha > 0:
        raise ConfigurationError(f"alpha must be > 0, got {alpha}")
    return 0.5 * alpha * _trapezoid(u.samples ** 2, u.grid.dt)


def ensemble_cost(u: ControlSignal, rho0: SpectralField, target: TargetPhase,
                  alpha: float, grid: GridSpec,
                  stride: int | None = None) -> CostBreakdown:
    """Full cost of a scalar control: one forward solve plus quadrature.

    Only the terminal field of the solve enters, so the value does not
    depend on the storage stride.
    """
    traj = solve_forward(rho0, u, grid, stride=stride)
    return CostBreakdown(terminal=terminal_cost(traj.final, target),
                         running=control_energy(u, alpha),
                         problem="ensemble")


def hamiltonian(mu: SpectralField, xi: SpectralField, u: float,
                alpha: float) -> float:
    """u * <xi * (1 + cos theta), mu> - (alpha/2) * u^2."""
    if mu.grid != xi.grid:
        raise ConfigurationError("density and dual live on different grids")
    gain = pairing(to_physical(mu).values, to_physical(xi).values, mu.grid)
    return u * gain - 0.5 * alpha * u * u


def feedback_control(mu: SpectralField, xi: SpectralField,
                     alpha: float) -> float:
    """The unique maximizer of the Hamiltonian in u: gain / alpha."""
    if not alpha > 0:
        raise ConfigurationError(f"alpha must be > 0, got {alpha}")
    if mu.grid != xi.grid:
        raise ConfigurationError("density and dual live on different grids")
    gain = pairing(to_physical(mu).values, to_physical(xi).values, mu.grid)
    return gain / alpha


def increment_via_formula(mu_new: Trajectory, xi_old: Trajectory,
                          u_new: ControlSignal, u_old: ControlSignal,
                          alpha: float) -> float:
    """Cost change I[u_new] - I[u_old] from the duality identity.

    ``mu_new`` is the trajectory of the new control, ``xi_old`` the dual
    trajectory of the old one.  The integrand at each time node is the
    Hamiltonian difference; stored fields are interpolated linearly in
    time where the stride skips nodes.
    """
    grid = mu_new.grid
    if xi_old.grid != grid or u_new.grid != grid or u_old.grid != grid:
        raise ConfigurationError(
            "trajectories and controls must share one grid")
    from .dynamics import _physical  # local import: array-level helper

    n = grid.n_steps
    phi = np.empty(n + 1)
    for i in range(n + 1):
        t = grid.times[i]
        mu_phys = _physical(mu_new.coeffs_at(t), grid)
        xi_phys = _physical(xi_old.coeffs_at(t), grid)
        gain = pairing(mu_phys, xi_phys, grid)
        du = u_new.samples[i] - u_old.samples[i]
        phi[i] = du * gain - 0.5 * alpha * (u_new.samples[i] ** 2
                                            - u_old.samples[i] ** 2)
    return -_trapezoid(phi, grid.dt)


@dataclass
class MeanFieldControl:
    """Control field w(theta, eta) stored spectrally on the time grid."""

    grid: GridSpec
    stride: int
    fields: list

    def __post_init__(self):
        expected = self.grid.n_steps // self.stride + 1
        if self.grid.n_steps % self.stride or len(self.fields) != expected:
            raise ConfigurationError(
                f"mean-field control stores {len(self.fields)} fields, "
                f"expected {expected} at stride {self.stride}")

    @classmethod
    def zero(cls, grid: GridSpec, stride: int | None = None) -> "MeanFieldControl":
        from .dynamics import check_stride
        from .grids import zeros_spectral
        stride = check_stride(grid, stride)
        n_stored = grid.n_steps // stride + 1
        return cls(grid, stride, [zeros_spectral(grid) for _ in range(n_stored)])

    def coeffs_at(self, t: float) -> np.ndarray:
        span = self.stride * self.grid.dt
        if t <= 0.0:
            return self.fields[0].coeffs
        if t >= self.grid.horizon:
            return self.fields[-1].coeffs
        pos = t / span
        s = int(pos)
        lam = pos - s
        if s >= len(self.fields) - 1:
            return self.fields[-1].coeffs
        if lam == 0.0:
            return self.fields[s].coeffs
        return (1.0 - lam) * self.fields[s].coeffs + lam * self.fields[s + 1].coeffs

    def values_at(self, t: float) -> np.ndarray:
        from .dynamics import _physical
        return _physical(self.coeffs_at(t), self.grid)

    def max_abs(self) -> float:
        from .dynamics import _physical
        return max(float(np.max(np.abs(_physical(f.coeffs, self.grid))))
                   for f in self.fields)


def meanfield_feedback(xi: Trajectory, alpha: float) -> MeanFieldControl:
    """Pointwise feedback field w = (1/alpha) * xi * (1 + cos theta)."""
    if not alpha > 0:
        raise ConfigurationError(f"alpha must be > 0, got {alpha}")
    from .dynamics import _physical
    grid = xi.grid
    plus_cos = (1.0 + grid._cos_theta)[None, :]
    fields = []
    for f in xi.fields:
        w_phys = _physical(f.coeffs, grid) * plus_cos / alpha
        fields.append(SpectralField(grid, np.fft.fft(w_phys, axis=1) / grid.n_modes))
    return MeanFieldControl(grid, xi.stride, fields)


def meanfield_cost(w: MeanFieldControl, rho0: SpectralField,
                   target: TargetPhase, alpha: float, grid: GridSpec,
                   stride: int | None = None) -> CostBreakdown:
    """Cost of a mean-field control: forward solve with a control field.

    The running integrand r(t) = (alpha/2) * int w_t^2 dmu_t is
    accumulated at every time node during the march and integrated by
    the trapezoid rule, so the storage stride does not affect the value.
    """
    if w.grid != grid or rho0.grid != grid:
        raise ConfigurationError("control field/density grid mismatch")
    from .dynamics import (_physical, _require_finite, _rhs, check_stability,
                           check_stride)
    stride = check_stride(grid, stride)
    check_stability(grid, w.max_abs())
    _require_finite(rho0.coeffs, 0)

    dt = grid.dt
    running = np.empty(grid.n_steps + 1)
    weights = grid.eta_weights
    theta_quad = 2.0 * np.pi / grid.n_modes

    def running_density(mu_coeffs: np.ndarray, w_phys: np.ndarray) -> float:
        mu_phys = _physical(mu_coeffs, grid)
        slices = theta_quad * np.sum(mu_phys * w_phys * w_phys, axis=1)
        return 0.5 * alpha * float(np.dot(weights, slices))

    y = rho0.coeffs.copy()
    w_here = w.values_at(0.0)
    running[0] = running_density(y, w_here)
    final = None
    for i in range(grid.n_steps):
        t = grid.times[i]
        w_mid = w.values_at(t + 0.5 * dt)
        w_next = w.values_at(t + dt)
        k1 = _rhs(y, w_here, grid)
        k2 = _rhs(y + 0.5 * dt * k1, w_mid, grid)
        k3 = _rhs(y + 0.5 * dt * k2, w_mid, grid)
        k4 = _rhs(y + dt * k3, w_next, grid)
        y = y + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        _require_finite(y, i + 1)
        running[i + 1] = running_density(y, w_next)
        w_here = w_next
    final = SpectralField(grid, y)

    return CostBreakdown(terminal=terminal_cost(final, target),
                         running=_trapezoid(running, dt),
                         problem="meanfield")

"""Transport of phase densities driven by a common control.

Each eta slice obeys the continuity equation

    d/dt f + d/dtheta ( v_u(theta, eta) f ) = 0,
    v_u(theta, eta) = (1 - cos theta) + (1 + cos theta) * (u + eta),

advanced pseudospectrally: multiply in physical space, differentiate in
coefficient space, march with the classical Runge-Kutta scheme.  With
the 2/3-rule mask on (default) the advective product, whose degree only
exceeds the state's by one, never aliases; mode zero of the update is
identically zero, so every slice conserves its mass exactly.

The same right-hand side integrates three flows:

* ``solve_forward``    -- density under a prescribed control signal;
* ``solve_backward``   -- the dual field, which obeys the identical
  equation backward in time (negated RHS, control read in reverse);
* ``solve_closed_loop``-- density under the instantaneous feedback
  u = (1/alpha) * <dual * (1 + cos theta), density>, evaluated with the
  current stage field at every Runge-Kutta stage.

Memory for long horizons is bounded by storing every ``stride``-th
field; quantities at intermediate times are linear interpolants of the
stored neighbors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, NumericsError
from .grids import GridSpec, SpectralField, to_physical

# Imaginary-axis stability radius of the classical Runge-Kutta scheme,
# rounded down: |lambda| * dt <= 2.8 with |lambda| ~ max|v| * n_modes / 2.
RK4_IMAG_STABILITY = 2.8

# Default cap on stored trajectory bytes; the stride grows to respect it.
DEFAULT_STORAGE_BYTES = 512 * 2**20


def velocity(theta, eta, u):
    """Phase velocity (1 - cos theta) + (1 + cos theta) * (u + eta)."""
    c = np.cos(theta)
    return (1.0 - c) + (1.0 + c) * (u + eta)


@dataclass
class ControlSignal:
    """Piecewise-linear scalar control sampled on the time grid."""

    grid: GridSpec
    samples: np.ndarray

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.shape != (self.grid.n_steps + 1,):
            raise ConfigurationError(
                f"control has {self.samples.shape} samples, expected "
                f"{self.grid.n_steps + 1}")

    @classmethod
    def zero(cls, grid: GridSpec) -> "ControlSignal":
        return cls(grid, np.zeros(grid.n_steps + 1))

    @classmethod
    def from_function(cls, grid: GridSpec, fn) -> "ControlSignal":
        return cls(grid, np.asarray(fn(grid.times), dtype=np.float64))

    def at(self, t: float) -> float:
        """Piecewise-linear evaluation; clamped at the horizon ends."""
        return float(np.interp(t, self.grid.times, self.samples))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.samples)))


@dataclass
class TargetPhase:
    """Desired terminal phase per eta node, shape (n_eta,)."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != (self.grid.n_eta,):
            raise ConfigurationError(
                f"target has shape {self.values.shape}, expected "
                f"({self.grid.n_eta},)")

    @classmethod
    def constant(cls, grid: GridSpec, value: float) -> "TargetPhase":
        return cls(grid, np.full(grid.n_eta, float(value)))

    def at_eta(self, eta) -> np.ndarray:
        """Target phase at arbitrary eta, linear between grid nodes."""
        if self.grid.n_eta == 1:
            return np.full_like(np.asarray(eta, dtype=np.float64),
                                self.values[0])
        return np.interp(eta, self.grid.eta, self.values)


@dataclass
class Trajectory:
    """Fields stored at indices 0, stride, 2*stride, ..., n_steps.

    ``fields[s]`` holds the state at time ``s * stride * dt`` in forward
    time order regardless of the direction of integration.
    """

    grid: GridSpec
    stride: int
    direction: str  # "forward" | "backward"
    fields: list = field(default_factory=list)

    @property
    def n_stored(self) -> int:
        return self.grid.n_steps // self.stride + 1

    @property
    def stored_times(self) -> np.ndarray:
        return self.grid.times[:: self.stride]

    @property
    def initial(self) -> SpectralField:
        return self.fields[0]

    @property
    def final(self) -> SpectralField:
        return self.fields[-1]

    def coeffs_at(self, t: float) -> np.ndarray:
        """Coefficients at time t, linear between stored fields."""
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

    def field_at(self, t: float) -> SpectralField:
        return SpectralField(self.grid, self.coeffs_at(t).copy())


def default_stride(grid: GridSpec,
                   budget_bytes: int = DEFAULT_STORAGE_BYTES) -> int:
    """Smallest divisor of n_steps keeping stored fields under budget."""
    per_field = 16 * grid.n_eta * grid.n_modes
    for stride in range(1, grid.n_steps + 1):
        if grid.n_steps % stride:
            continue
        if per_field * (grid.n_steps // stride + 1) <= budget_bytes:
            return stride
    return grid.n_steps


def check_stride(grid: GridSpec, stride) -> int:
    if stride is None:
        return default_stride(grid)
    stride = int(stride)
    if stride < 1 or grid.n_steps % stride != 0:
        raise ConfigurationError(
            f"stride {stride} does not divide n_steps={grid.n_steps}")
    return stride


def check_stability(grid: GridSpec, u_max: float) -> None:
    """Guard dt * n_modes * max|v| / 2 against the RK4 stability radius.

    max|v| is bounded by 2 + 2 * (|u| + max|eta|).  Violations are a
    configuration problem and are rejected before any integration.
    """
    eta_amp = max(abs(grid.eta_min), abs(grid.eta_max))
    v_max = 2.0 + 2.0 * (abs(u_max) + eta_amp)
    radius = grid.dt * grid.n_modes * v_max / 2.0
    if radius > RK4_IMAG_STABILITY:
        raise ConfigurationError(
            f"unstable discretization: dt*n_modes*max|v|/2 = {radius:.3f} "
            f"> {RK4_IMAG_STABILITY} (dt={grid.dt:.6g}, n_modes={grid.n_modes}, "
            f"max|u|={u_max:.3g}); refine dt or coarsen theta")


# --- right-hand side ---------------------------------------------------

def _physical(coeffs: np.ndarray, grid: GridSpec) -> np.ndarray:
    return (np.fft.ifft(coeffs, axis=1) * grid.n_modes).real


def _rhs(coeffs: np.ndarray, u, grid: GridSpec) -> np.ndarray:
    """-d/dtheta(v_u * f) in coefficient space.

    ``u`` is a scalar for a common ensemble control or an (n_eta, n_modes)
    physical array for a mean-field control field.
    """
    values = _physical(coeffs, grid)
    cos_t = grid._cos_theta
    # Scalar u broadcasts to (n_eta, 1); a control field is (n_eta, n_modes).
    drive = u + grid.eta[:, None]
    v = (1.0 - cos_t)[None, :] + (1.0 + cos_t)[None, :] * drive
    prod_hat = np.fft.fft(v * values, axis=1) / grid.n_modes
    if grid.dealias:
        prod_hat *= grid._dealias_mask
    return grid._neg_ik * prod_hat


def _rk4(coeffs: np.ndarray, u_at, t: float, dt: float, sign: float,
         grid: GridSpec) -> np.ndarray:
    """One classical Runge-Kutta step of sign * rhs from time t."""
    half = t + 0.5 * dt
    k1 = sign * _rhs(coeffs, u_at(t), grid)
    k2 = sign * _rhs(coeffs + 0.5 * dt * k1, u_at(half), grid)
    k3 = sign * _rhs(coeffs + 0.5 * dt * k2, u_at(half), grid)
    k4 = sign * _rhs(coeffs + dt * k3, u_at(t + dt), grid)
    return coeffs + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)


def step_rk4(state: SpectralField, u_at, t: float, dt: float,
             sign: float = 1.0) -> SpectralField:
    """Public single step; ``u_at`` maps a stage time to the control value."""
    out = _rk4(state.coeffs, u_at, t, dt, sign, state.grid)
    if not np.all(np.isfinite(out)):
        raise NumericsError(f"non-finite field after step from t={t:.6g}")
    return SpectralField(state.grid, out)


def _require_finite(coeffs: np.ndarray, step_index: int) -> None:
    if not np.all(np.isfinite(coeffs)):
        raise NumericsError(
            f"numeric blow-up: non-finite field at time index {step_index}")


def solve_forward(rho0: SpectralField, u: ControlSignal, grid: GridSpec,
                  stride: int | None = None) -> Trajectory:
    """March the density from 0 to T under the prescribed control.

    Parameters
    ----------
    rho0 : SpectralField
        Initial density (any finite Hermitian field; mass is conserved,
        not imposed).
    u : ControlSignal
        Piecewise-linear control on the same grid.
    grid : GridSpec
        Must equal ``rho0.grid`` and ``u.grid``.
    stride : int, optional
        Storage stride; must divide n_steps.  Defaults to the smallest
        divisor that fits the storage budget.

    Returns
    -------
    Trajectory with fields at indices {0, stride, ..., n_steps}.
    """
    if rho0.grid != grid or u.grid != grid:
        raise ConfigurationError("rho0/control grid does not match solver grid")
    stride = check_stride(grid, stride)
    check_stability(grid, u.max_abs())
    _require_finite(rho0.coeffs, 0)

    dt = grid.dt
    y = rho0.coeffs.copy()
    traj = Trajectory(grid, stride, "forward",
                      [SpectralField(grid, y.copy())])
    for i in range(grid.n_steps):
        y = _rk4(y, u.at, grid.times[i], dt, 1.0, grid)
        _require_finite(y, i + 1)
        if (i + 1) % stride == 0:
            traj.fields.append(SpectralField(grid, y.copy()))
    return traj


def terminal_dual(target: TargetPhase, grid: GridSpec) -> SpectralField:
    """Terminal condition of the dual field: sin(target(eta) - theta).

    Spectrally this puts c_{+1} = (i/2) exp(-i*target) and its conjugate
    at c_{-1} on every slice.
    """
    if target.grid != grid:
        raise ConfigurationError("target grid does not match solver grid")
    coeffs = np.zeros(grid.field_shape(), dtype=np.complex128)
    phase = np.exp(-1j * target.values)
    coeffs[:, 1] = 0.5j * phase
    coeffs[:, -1] = np.conj(coeffs[:, 1])
    return SpectralField(grid, coeffs)


def solve_backward(xi_terminal: SpectralField, u: ControlSignal,
                   grid: GridSpec, stride: int | None = None) -> Trajectory:
    """Integrate the dual field from T down to 0.

    Substituting s = T - t turns the terminal-value problem into an
    initial-value one with negated right-hand side and the control read
    in reversed order.  The returned trajectory is stored in forward
    time order, so ``traj.initial`` is the dual at t = 0.
    """
    if xi_terminal.grid != grid or u.grid != grid:
        raise ConfigurationError("dual/control grid does not match solver grid")
    stride = check_stride(grid, stride)
    check_stability(grid, u.max_abs())
    _require_finite(xi_terminal.coeffs, grid.n_steps)

    horizon = grid.horizon
    dt = grid.dt

    def u_reversed(s: float) -> float:
        return u.at(horizon - s)

    y = xi_terminal.coeffs.copy()
    reversed_fields = [SpectralField(grid, y.copy())]
    for i in range(grid.n_steps):
        y = _rk4(y, u_reversed, grid.times[i], dt, -1.0, grid)
        _require_finite(y, grid.n_steps - (i + 1))
        if (i + 1) % stride == 0:
            reversed_fields.append(SpectralField(grid, y.copy()))
    reversed_fields.reverse()
    return Trajectory(grid, stride, "backward", reversed_fields)


def pairing(mu_values: np.ndarray, xi_values: np.ndarray,
            grid: GridSpec) -> float:
    """<xi * (1 + cos theta), mu> over the phase cylinder.

    Both arguments are physical-space arrays of shape (n_eta, n_modes).
    Fixed reduction order: theta within each slice, then the weighted
    eta sum.
    """
    integrand = mu_values * xi_values * (1.0 + grid._cos_theta)[None, :]
    slices = (2.0 * np.pi / grid.n_modes) * np.sum(integrand, axis=1)
    return float(np.dot(grid.eta_weights, slices))


def solve_closed_loop(xi: Trajectory, rho0: SpectralField, alpha: float,
                      grid: GridSpec,
                      stride: int | None = None) -> tuple[Trajectory, ControlSignal]:
    """March the density under the instantaneous dual feedback.

    At every Runge-Kutta stage the control is

        u = (1/alpha) * <xi_t * (1 + cos theta), mu_stage>,

    with xi_t interpolated linearly between the stored dual fields.
    Returns the trajectory and the realized control sampled at the time
    nodes (the stage-one value at each step, plus the terminal value).
    """
    if xi.grid != grid or rho0.grid != grid:
        raise ConfigurationError("dual/density grid does not match solver grid")
    if not alpha > 0:
        raise ConfigurationError(f"alpha must be > 0, got {alpha}")
    stride = check_stride(grid, stride)
    _require_finite(rho0.coeffs, 0)

    dt = grid.dt
    inv_alpha = 1.0 / alpha
    plus_cos = (1.0 + grid._cos_theta)[None, :]
    weights = grid.eta_weights
    theta_quad = 2.0 * np.pi / grid.n_modes

    def feedback(mu_coeffs: np.ndarray, xi_phys: np.ndarray) -> float:
        mu_phys = _physical(mu_coeffs, grid)
        slices = theta_quad * np.sum(mu_phys * xi_phys * plus_cos, axis=1)
        return inv_alpha * float(np.dot(weights, slices))

    y = rho0.coeffs.copy()
    samples = np.empty(grid.n_steps + 1)
    traj = Trajectory(grid, stride, "forward",
                      [SpectralField(grid, y.copy())])
    xi_here = _physical(xi.coeffs_at(0.0), grid)
    for i in range(grid.n_steps):
        t = grid.times[i]
        xi_mid = _physical(xi.coeffs_at(t + 0.5 * dt), grid)
        xi_next = _physical(xi.coeffs_at(t + dt), grid)

        u1 = feedback(y, xi_here)
        k1 = _rhs(y, u1, grid)
        y2 = y + 0.5 * dt * k1
        u2 = feedback(y2, xi_mid)
        k2 = _rhs(y2, u2, grid)
        y3 = y + 0.5 * dt * k2
        u3 = feedback(y3, xi_mid)
        k3 = _rhs(y3, u3, grid)
        y4 = y + dt * k3
        u4 = feedback(y4, xi_next)
        k4 = _rhs(y4, u4, grid)

        samples[i] = u1
        y = y + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        _require_finite(y, i + 1)
        if (i + 1) % stride == 0:
            traj.fields.append(SpectralField(grid, y.copy()))
        xi_here = xi_next
    samples[grid.n_steps] = feedback(y, xi_here)
    return traj, ControlSignal(grid, samples)


def hermitian_drift(traj: Trajectory) -> float:
    """Worst Hermitian asymmetry across the stored fields."""
    return max(f.hermitian_asymmetry() for f in traj.fields)


def mass_drift(traj: Trajectory) -> tuple[float, float]:
    """(max relative per-slice drift, max total-mass deviation from t=0)."""
    ref = traj.fields[0].coeffs[:, 0].real
    weights = traj.grid.eta_weights
    ref_total = float(np.dot(weights, 2.0 * np.pi * ref))
    slice_scale = np.maximum(np.abs(ref), 1e-300)
    worst_slice = 0.0
    worst_total = 0.0
    for f in traj.fields:
        cur = f.coeffs[:, 0].real
        worst_slice = max(worst_slice,
                          float(np.max(np.abs(cur - ref) / slice_scale)))
        total = float(np.dot(weights, 2.0 * np.pi * cur))
        worst_total = max(worst_total, abs(total - ref_total))
    return worst_slice, worst_total

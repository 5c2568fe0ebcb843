"""Direct particle simulation used to cross-check the transport solver.

A finite population carries (theta_k, eta_k) pairs; each particle obeys
the scalar phase equation under the common control while its eta stays
frozen.  Sampling, stepping, and reductions are deterministic for a
fixed seed (counter-based Philox generator, fixed orderings), so any
two runs of the same configuration agree bitwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import ControlSignal, TargetPhase, velocity
from .errors import ConfigurationError, NumericsError
from .grids import GridSpec, PhysicalField, SpectralField

TWO_PI = 2.0 * np.pi


@dataclass
class ParticleEnsemble:
    """Phases in [0, 2*pi) and frozen eta values, shape (n,) each."""

    thetas: np.ndarray
    etas: np.ndarray

    def __post_init__(self):
        self.thetas = np.asarray(self.thetas, dtype=np.float64)
        self.etas = np.asarray(self.etas, dtype=np.float64)
        if self.thetas.shape != self.etas.shape or self.thetas.ndim != 1:
            raise ConfigurationError("thetas and etas must be equal-length 1-D")

    def __len__(self) -> int:
        return len(self.thetas)


def _cumulative(values: np.ndarray, nodes: np.ndarray) -> np.ndarray:
    """Trapezoid cumulative of a tabulated density, normalized to [0, 1]."""
    steps = np.diff(nodes) * 0.5 * (values[1:] + values[:-1])
    cdf = np.concatenate([[0.0], np.cumsum(steps)])
    total = cdf[-1]
    if total <= 0:
        raise ConfigurationError("density integrates to a non-positive mass")
    return cdf / total


def sample_initial(density: PhysicalField, n: int, seed: int) -> ParticleEnsemble:
    """Draw n particles from a nonnegative tabulated density.

    Inverse-CDF sampling of the bilinear extension of the table.  The
    eta marginal (linear between slice masses, so its tabulated
    cumulative is piecewise quadratic) is inverted in closed form per
    cell; the theta value then comes from one of the two bracketing
    slices, picked with the mass-weighted blend probability, which
    realizes the interpolated conditional exactly.  Slices of zero mass
    are never selected, so densities that vanish on part of the eta
    range (such as the clipped variant of the standard initial profile)
    sample cleanly.  Negative densities are rejected outright; the
    oracle has no meaning for signed measures.
    """
    if n < 1:
        raise ConfigurationError(f"need at least one particle, got {n}")
    grid = density.grid
    values = density.values
    if np.min(values) < 0.0:
        j, m = np.unravel_index(np.argmin(values), values.shape)
        raise ConfigurationError(
            f"density is negative at theta={grid.theta[m]:.6f}, "
            f"eta={grid.eta[j]:.6f} (value {values[j, m]:.3e}); the particle "
            "oracle requires a nonnegative density")

    rng = np.random.Generator(np.random.Philox(seed))
    draws = rng.random((3, n))

    # Per-slice theta tables on the closed circle [0, 2*pi]; slices with
    # no mass get no table (they are unreachable below).
    theta_nodes = np.concatenate([grid.theta, [TWO_PI]])
    closed = np.concatenate([values, values[:, :1]], axis=1)
    masses = (TWO_PI / grid.n_modes) * np.sum(values, axis=1)
    slice_cdfs = [_cumulative(closed[j], theta_nodes) if masses[j] > 0 else None
                  for j in range(grid.n_eta)]

    if grid.n_eta == 1:
        if masses[0] <= 0:
            raise ConfigurationError("density integrates to a non-positive mass")
        etas = np.full(n, grid.eta[0])
        slice_pick = np.zeros(n, dtype=np.int64)
    else:
        node_cdf = np.concatenate(
            [[0.0], np.cumsum(0.5 * np.diff(grid.eta)
                              * (masses[1:] + masses[:-1]))])
        total = node_cdf[-1]
        if total <= 0:
            raise ConfigurationError("density integrates to a non-positive mass")
        q = draws[0] * total
        cell = np.clip(np.searchsorted(node_cdf, q, side="right") - 1,
                       0, grid.n_eta - 2)
        d_eta = grid.eta[1] - grid.eta[0]
        a = masses[cell]
        b = masses[cell + 1]
        # Invert int_0^(s*d_eta) [a + (b-a)x/d_eta] dx = q - C_cell for s;
        # the 2r/(a+sqrt(...)) form of the quadratic root is stable for
        # every sign of b - a, including a vanishing endpoint mass.
        r = (q - node_cdf[cell]) / d_eta
        disc = np.maximum(a * a + 2.0 * (b - a) * r, 0.0)
        denom = a + np.sqrt(disc)
        s = np.where(denom > 0.0, 2.0 * r / np.where(denom > 0.0, denom, 1.0),
                     0.0)
        s = np.clip(s, 0.0, 1.0)
        etas = grid.eta[cell] + s * d_eta
        # Mass-weighted pick between the bracketing slices: the blended
        # density (1-s)*rho_c + s*rho_{c+1} assigns the right slice the
        # fraction s*b of its mass.
        lam_den = (1.0 - s) * a + s * b
        lam = np.where(lam_den > 0.0,
                       s * b / np.where(lam_den > 0.0, lam_den, 1.0), 1.0)
        slice_pick = cell + (draws[1] < lam)

    thetas = np.empty(n)
    for j in range(grid.n_eta):
        mask = slice_pick == j
        if np.any(mask):
            if slice_cdfs[j] is None:
                raise NumericsError(
                    f"sampled a zero-mass slice at eta={grid.eta[j]:.6f}")
            thetas[mask] = np.interp(draws[2][mask], slice_cdfs[j], theta_nodes)
    return ParticleEnsemble(np.mod(thetas, TWO_PI), etas)


def simulate(ensemble: ParticleEnsemble, u: ControlSignal,
             dt: float) -> ParticleEnsemble:
    """March every particle to the horizon with the classical RK4 scheme.

    ``dt`` must divide the horizon.  Eta values are returned untouched
    (bitwise); phases are wrapped to [0, 2*pi) at the end only.
    """
    horizon = u.grid.horizon
    n_steps = round(horizon / dt)
    if n_steps < 1 or abs(n_steps * dt - horizon) > 1e-9 * horizon:
        raise ConfigurationError(
            f"dt={dt} does not divide the horizon {horizon}")

    theta = ensemble.thetas.copy()
    eta = ensemble.etas
    for i in range(n_steps):
        t = i * dt
        u0 = u.at(t)
        u_half = u.at(t + 0.5 * dt)
        u1 = u.at(t + dt)
        k1 = velocity(theta, eta, u0)
        k2 = velocity(theta + 0.5 * dt * k1, eta, u_half)
        k3 = velocity(theta + 0.5 * dt * k2, eta, u_half)
        k4 = velocity(theta + dt * k3, eta, u1)
        theta += (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
    if not np.all(np.isfinite(theta)):
        raise NumericsError("non-finite particle phase after integration")
    return ParticleEnsemble(np.mod(theta, TWO_PI), eta.copy())


def spike_period(eta: float, dt: float) -> float:
    """Time between spike crossings of an uncontrolled neuron.

    Integrates a single phase from theta = pi until the unwrapped phase
    passes pi + 2*pi, locating the crossing by linear interpolation.
    The analytic value is pi / sqrt(eta) for eta > 0.
    """
    if not eta > 0:
        raise ConfigurationError(f"spike period requires eta > 0, got {eta}")
    if not dt > 0:
        raise ConfigurationError(f"dt must be > 0, got {dt}")
    limit = 10.0 * math.pi / math.sqrt(eta)
    target = 3.0 * math.pi

    def speed(th: float) -> float:
        c = math.cos(th)
        return (1.0 - c) + (1.0 + c) * eta

    theta = math.pi
    t = 0.0
    while t < limit:
        k1 = speed(theta)
        k2 = speed(theta + 0.5 * dt * k1)
        k3 = speed(theta + 0.5 * dt * k2)
        k4 = speed(theta + dt * k3)
        theta_next = theta + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        if theta_next >= target:
            frac = (target - theta) / (theta_next - theta)
            return t + frac * dt
        theta = theta_next
        t += dt
    raise NumericsError(
        f"no spike crossing within {limit:.3f} time units for eta={eta}")


def empirical_terminal_cost(ensemble: ParticleEnsemble,
                            target: TargetPhase) -> tuple[float, float]:
    """Sample mean of the terminal mismatch and its standard error."""
    goals = target.at_eta(ensemble.etas)
    mismatch = 1.0 - np.cos(ensemble.thetas - goals)
    n = len(ensemble)
    mean = float(np.mean(mismatch))
    stderr = float(np.std(mismatch) / math.sqrt(n))
    return mean, stderr


def order_parameter(obj) -> complex:
    """Kuramoto order parameter: the average of exp(i*theta).

    Accepts a ParticleEnsemble (plain average over particles) or a
    SpectralField (2*pi times the eta-weighted c_{-1} coefficients).
    """
    if isinstance(obj, ParticleEnsemble):
        return complex(np.mean(np.exp(1j * obj.thetas)))
    if isinstance(obj, SpectralField):
        c_minus1 = obj.coeffs[:, -1]
        return complex(TWO_PI * np.dot(obj.grid.eta_weights, c_minus1))
    raise ConfigurationError(
        f"order_parameter expects particles or a spectral field, got {type(obj)}")

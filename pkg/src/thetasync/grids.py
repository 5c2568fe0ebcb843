"""Fourier grids, fields, and quadrature on the phase cylinder.

Densities live on S^1 x [eta_min, eta_max]: 2*pi-periodic in the phase
angle theta and parameterized (never differentiated) in the drive
parameter eta.  Each eta slice carries its own Fourier coefficient
vector; a field f is represented as

    f(theta, eta_j) = sum_k c_k(eta_j) * exp(i*k*theta),

with k running over {-M/2, ..., M/2 - 1} in FFT order.  Real fields are
Hermitian: c_{-k} = conj(c_k).

Quadrature is the rectangle rule in theta (spectrally exact for
trigonometric polynomials below the Nyquist degree) and the trapezoidal
rule on the uniform eta grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, NumericsError

# Relative tolerance on the imaginary residue a Hermitian coefficient
# array may leave behind after an inverse transform.
HERMITIAN_TOL = 1e-12


@dataclass(frozen=True, eq=True)
class GridSpec:
    """Discretization of the phase cylinder and the time horizon.

    Parameters
    ----------
    n_modes : int
        Number of Fourier collocation points per slice (even, >= 8).
    n_eta : int
        Number of eta grid nodes (>= 1).
    eta_min, eta_max : float
        Bounds of the eta interval; ``eta_min <= eta_max``.
    horizon : float
        Final time T > 0.
    n_steps : int
        Number of uniform time steps (>= 1).
    dealias : bool
        Apply the 2/3-rule mask to advective products (default True).

    Nodes are ``theta_m = 2*pi*m / n_modes`` and, for ``n_eta >= 2``,
    ``eta_j`` uniform on [eta_min, eta_max] including both endpoints.
    A single eta node sits at the interval midpoint.
    """

    n_modes: int
    n_eta: int
    eta_min: float
    eta_max: float
    horizon: float
    n_steps: int
    dealias: bool = True

    def __post_init__(self):
        if self.n_modes < 8 or self.n_modes % 2 != 0:
            raise ConfigurationError(
                f"n_modes must be even and >= 8, got {self.n_modes}")
        if self.n_eta < 1:
            raise ConfigurationError(f"n_eta must be >= 1, got {self.n_eta}")
        if not self.eta_min <= self.eta_max:
            raise ConfigurationError(
                f"eta_min={self.eta_min} exceeds eta_max={self.eta_max}")
        if not self.horizon > 0:
            raise ConfigurationError(f"horizon must be > 0, got {self.horizon}")
        if self.n_steps < 1:
            raise ConfigurationError(f"n_steps must be >= 1, got {self.n_steps}")

        m = self.n_modes
        theta = 2.0 * np.pi * np.arange(m) / m
        if self.n_eta == 1:
            eta = np.array([0.5 * (self.eta_min + self.eta_max)])
            span = self.eta_max - self.eta_min
            # Point-mass convention when the interval degenerates.
            weights = np.array([span if span > 0 else 1.0])
        else:
            eta = np.linspace(self.eta_min, self.eta_max, self.n_eta)
            d_eta = (self.eta_max - self.eta_min) / (self.n_eta - 1)
            weights = np.full(self.n_eta, d_eta)
            weights[0] *= 0.5
            weights[-1] *= 0.5
        modes = np.fft.fftfreq(m, d=1.0 / m).astype(np.int64)

        # Spectral derivative factor -i*k with the unpaired Nyquist mode
        # zeroed so real fields stay real.
        neg_ik = -1j * modes.astype(np.float64)
        neg_ik[m // 2] = 0.0

        keep = m // 3
        dealias_mask = (np.abs(modes) <= keep).astype(np.float64)

        for name, arr in (
            ("_theta", theta),
            ("_eta", eta),
            ("_eta_weights", weights),
            ("_modes", modes),
            ("_neg_ik", neg_ik),
            ("_dealias_mask", dealias_mask),
            ("_cos_theta", np.cos(theta)),
            ("_times", np.arange(self.n_steps + 1) * (self.horizon / self.n_steps)),
        ):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def dt(self) -> float:
        return self.horizon / self.n_steps

    @property
    def theta(self) -> np.ndarray:
        """Collocation angles, shape (n_modes,)."""
        return self._theta

    @property
    def eta(self) -> np.ndarray:
        """Eta nodes, shape (n_eta,)."""
        return self._eta

    @property
    def eta_weights(self) -> np.ndarray:
        """Trapezoidal eta quadrature weights, shape (n_eta,)."""
        return self._eta_weights

    @property
    def modes(self) -> np.ndarray:
        """Integer mode numbers in FFT order, shape (n_modes,)."""
        return self._modes

    @property
    def times(self) -> np.ndarray:
        """Time nodes t_i = i * dt, shape (n_steps + 1,)."""
        return self._times

    def field_shape(self) -> tuple[int, int]:
        return (self.n_eta, self.n_modes)


@dataclass
class PhysicalField:
    """Real collocation values, shape (n_eta, n_modes)."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != self.grid.field_shape():
            raise ConfigurationError(
                f"field shape {self.values.shape} does not match grid "
                f"{self.grid.field_shape()}")

    def copy(self) -> "PhysicalField":
        return PhysicalField(self.grid, self.values.copy())


@dataclass
class SpectralField:
    """Per-slice Fourier coefficients, shape (n_eta, n_modes), FFT order."""

    grid: GridSpec
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        if self.coeffs.shape != self.grid.field_shape():
            raise ConfigurationError(
                f"coefficient shape {self.coeffs.shape} does not match grid "
                f"{self.grid.field_shape()}")

    def copy(self) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs.copy())

    def hermitian_asymmetry(self) -> float:
        """Max |c_k - conj(c_{-k})| over all slices and modes."""
        c = self.coeffs
        m = self.grid.n_modes
        idx = (-np.arange(m)) % m
        return float(np.max(np.abs(c - np.conj(c[:, idx]))))


def zeros_spectral(grid: GridSpec) -> SpectralField:
    return SpectralField(grid, np.zeros(grid.field_shape(), dtype=np.complex128))


def physical_from_function(grid: GridSpec, fn) -> PhysicalField:
    """Tabulate ``fn(theta, eta)`` on the grid; fn must broadcast."""
    values = np.broadcast_to(
        fn(grid.theta[None, :], grid.eta[:, None]), grid.field_shape())
    return PhysicalField(grid, np.array(values, dtype=np.float64))


def to_spectral(field: PhysicalField) -> SpectralField:
    """Forward transform of each eta slice.

    Coefficients follow the convention f = sum_k c_k exp(i k theta), so
    the constant field 1 maps to c_0 = 1.
    """
    if not np.all(np.isfinite(field.values)):
        raise NumericsError("non-finite values in physical field")
    coeffs = np.fft.fft(field.values, axis=1) / field.grid.n_modes
    return SpectralField(field.grid, coeffs)


def to_physical(field: SpectralField) -> PhysicalField:
    """Inverse transform; input must be Hermitian (a real field).

    The imaginary residue left after the inverse FFT must stay below
    ``HERMITIAN_TOL`` relative to the field scale, otherwise the input
    was not a real field and a NumericsError is raised.
    """
    if not np.all(np.isfinite(field.coeffs)):
        raise NumericsError("non-finite coefficients in spectral field")
    complex_values = np.fft.ifft(field.coeffs, axis=1) * field.grid.n_modes
    scale = max(1.0, float(np.max(np.abs(complex_values.real))))
    residue = float(np.max(np.abs(complex_values.imag)))
    if residue > HERMITIAN_TOL * scale:
        raise NumericsError(
            f"non-Hermitian spectral input: imaginary residue {residue:.3e} "
            f"exceeds {HERMITIAN_TOL:.1e} * {scale:.3e}")
    return PhysicalField(field.grid, np.ascontiguousarray(complex_values.real))


def integrate(field: SpectralField, weight) -> float:
    """Integral of ``weight * field`` over the phase cylinder.

    ``weight`` is either a callable ``weight(theta, eta)`` receiving
    broadcastable arrays of shape (1, n_modes) and (n_eta, 1), or a
    precomputed array of shape (n_eta, n_modes).  The rectangle rule is
    used in theta, trapezoid in eta; the eta reduction runs in fixed
    node order so results are reproducible bit for bit.
    """
    grid = field.grid
    values = to_physical(field).values
    if callable(weight):
        w = np.broadcast_to(
            weight(grid.theta[None, :], grid.eta[:, None]), grid.field_shape())
    else:
        w = np.asarray(weight, dtype=np.float64)
        if w.shape != grid.field_shape():
            raise ConfigurationError(
                f"weight shape {w.shape} does not match grid {grid.field_shape()}")
    slice_integrals = (2.0 * np.pi / grid.n_modes) * np.sum(values * w, axis=1)
    return float(np.dot(grid.eta_weights, slice_integrals))


def slice_mass(field: SpectralField, j: int) -> float:
    """Mass of the eta slice j: integral over theta only, i.e. 2*pi*c_0."""
    if not 0 <= j < field.grid.n_eta:
        raise ConfigurationError(
            f"slice index {j} out of range for n_eta={field.grid.n_eta}")
    return float(2.0 * np.pi * field.coeffs[j, 0].real)


def total_mass(field: SpectralField) -> float:
    """Eta-weighted sum of slice masses."""
    masses = 2.0 * np.pi * field.coeffs[:, 0].real
    return float(np.dot(field.grid.eta_weights, masses))

"""Builtin initial densities and their normalization.

Names accepted by the run configuration:

* ``paper_cossin2``          -- (2 + 3 cos 2*theta - 2 sin 2*theta) * eta;
  signed (the harmonic amplitude exceeds the offset), so it is only a
  density after normalization, with negative lobes kept.
* ``paper_cossin2_clipped``  -- the same profile clipped at zero; the
  nonnegative stand-in the particle oracle can sample.
* ``uniform``                -- constant on the whole cylinder.
* ``vonmises:<kappa>:<mu>``  -- von Mises in theta, uniform in eta.
* ``table:<path>``           -- tabulated on the grid (read by the io layer).
"""

from __future__ import annotations

import warnings

import numpy as np

from .errors import ConfigurationError
from .grids import (GridSpec, PhysicalField, SpectralField, integrate,
                    to_spectral)


def paper_cossin2(grid: GridSpec) -> PhysicalField:
    theta = grid.theta[None, :]
    profile = 2.0 + 3.0 * np.cos(2.0 * theta) - 2.0 * np.sin(2.0 * theta)
    return PhysicalField(grid, profile * grid.eta[:, None])


def paper_cossin2_clipped(grid: GridSpec) -> PhysicalField:
    raw = paper_cossin2(grid)
    return PhysicalField(grid, np.maximum(raw.values, 0.0))


def uniform(grid: GridSpec) -> PhysicalField:
    return PhysicalField(grid, np.ones(grid.field_shape()))


def vonmises(grid: GridSpec, kappa: float, center: float) -> PhysicalField:
    if kappa < 0:
        raise ConfigurationError(f"kappa must be >= 0, got {kappa}")
    theta = grid.theta[None, :]
    profile = np.exp(kappa * np.cos(theta - center)) / (2.0 * np.pi * np.i0(kappa))
    return PhysicalField(grid, np.broadcast_to(profile, grid.field_shape()).copy())


def normalize_density(raw: PhysicalField) -> SpectralField:
    """Scale a field to unit total mass.

    Signed inputs are accepted with a warning (the transport equation is
    linear, so negative lobes advect consistently); a non-positive total
    mass is a configuration error.
    """
    spectral = to_spectral(raw)
    mass = integrate(spectral, lambda th, e: np.ones_like(th + e))
    if not mass > 0:
        raise ConfigurationError(
            f"initial density has non-positive total mass {mass:.6g}")
    if np.min(raw.values) < 0:
        warnings.warn(
            "initial density is signed; normalizing the signed measure "
            "to unit total mass", stacklevel=2)
    return SpectralField(raw.grid, spectral.coeffs / mass)


def builtin_density(name: str, grid: GridSpec) -> PhysicalField:
    """Resolve a builtin density name (tables are handled by the io layer)."""
    if name == "paper_cossin2":
        return paper_cossin2(grid)
    if name == "paper_cossin2_clipped":
        return paper_cossin2_clipped(grid)
    if name == "uniform":
        return uniform(grid)
    if name.startswith("vonmises:"):
        parts = name.split(":")
        if len(parts) != 3:
            raise ConfigurationError(
                f"vonmises density needs 'vonmises:<kappa>:<mu>', got {name!r}")
        try:
            kappa, center = float(parts[1]), float(parts[2])
        except ValueError as exc:
            raise ConfigurationError(f"bad vonmises parameters in {name!r}") from exc
        return vonmises(grid, kappa, center)
    raise ConfigurationError(f"unknown initial density {name!r}")

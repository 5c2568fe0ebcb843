"""Optimal ensemble and mean-field control of theta-neuron populations."""

from .config import RunConfig, resolve_config
from .costs import (CostBreakdown, MeanFieldControl, control_energy,
                    ensemble_cost, feedback_control, hamiltonian,
                    increment_via_formula, meanfield_cost, meanfield_feedback,
                    terminal_cost, terminal_mismatch)
from .densities import builtin_density, normalize_density
from .dynamics import (ControlSignal, TargetPhase, Trajectory, check_stability,
                       default_stride, solve_backward, solve_closed_loop,
                       solve_forward, step_rk4, terminal_dual, velocity)
from .errors import ConfigurationError, NumericsError
from .grids import (GridSpec, PhysicalField, SpectralField, integrate,
                    physical_from_function, slice_mass, to_physical,
                    to_spectral, total_mass, zeros_spectral)
from .optimizer import (IterationRecord, OptimizeReport, ProblemSpec, improve,
                        optimize)
from .particles import (ParticleEnsemble, empirical_terminal_cost,
                        order_parameter, sample_initial, simulate,
                        spike_period)

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError", "ControlSignal", "CostBreakdown", "GridSpec",
    "IterationRecord", "MeanFieldControl", "NumericsError", "OptimizeReport",
    "ParticleEnsemble", "PhysicalField", "ProblemSpec", "RunConfig",
    "SpectralField",
    "TargetPhase", "Trajectory", "builtin_density", "check_stability",
    "control_energy", "default_stride", "empirical_terminal_cost",
    "ensemble_cost", "feedback_control", "hamiltonian", "improve",
    "increment_via_formula", "integrate", "meanfield_cost",
    "meanfield_feedback", "normalize_density", "optimize", "order_parameter",
    "physical_from_function", "resolve_config", "sample_initial", "simulate",
    "slice_mass",
    "solve_backward", "solve_closed_loop", "solve_forward", "spike_period",
    "step_rk4", "terminal_cost", "terminal_dual", "terminal_mismatch",
    "to_physical", "to_spectral", "total_mass", "velocity", "zeros_spectral",
    "__version__",
]

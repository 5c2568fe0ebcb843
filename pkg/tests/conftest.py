import time
import warnings

import numpy as np
import pytest

from thetasync import (ControlSignal, GridSpec, ProblemSpec, TargetPhase,
                       Trajectory, normalize_density, optimize)
from thetasync.densities import paper_cossin2


def make_grid(n_modes=32, n_eta=5, eta_min=0.0, eta_max=1.0,
              horizon=1.0, n_steps=60, dealias=True):
    return GridSpec(n_modes=n_modes, n_eta=n_eta, eta_min=eta_min,
                    eta_max=eta_max, horizon=horizon, n_steps=n_steps,
                    dealias=dealias)


def two_point_trajectory(grid, field0, field_final=None, direction="backward"):
    """Trajectory storing only the endpoint fields (constant if one given)."""
    if field_final is None:
        field_final = field0.copy()
    return Trajectory(grid, grid.n_steps, direction,
                      [field0.copy(), field_final.copy()])


def paper_rho0(grid):
    """Normalized standard initial density, signed-input warning silenced."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return normalize_density(paper_cossin2(grid))


@pytest.fixture(scope="session")
def desk_grid():
    return GridSpec(n_modes=128, n_eta=51, eta_min=0.0, eta_max=1.0,
                    horizon=6.0, n_steps=1200)


@pytest.fixture(scope="session")
def desk_problem(desk_grid):
    return ProblemSpec(grid=desk_grid, rho0=paper_rho0(desk_grid),
                       target=TargetPhase.constant(desk_grid, np.pi),
                       alpha=1.0, epsilon=0.01, max_iters=50,
                       initial_guess=ControlSignal.zero(desk_grid))


@pytest.fixture(scope="session")
def desk_run(desk_problem):
    """The full desk descent run plus its wall-clock seconds."""
    start = time.perf_counter()
    report = optimize(desk_problem)
    return report, time.perf_counter() - start


@pytest.fixture(scope="session")
def desk_report(desk_run):
    return desk_run[0]

"""Usual and caustic-free semiclassical thermal densities of the quartic
double well, with the classical trajectory machinery behind them."""

from ._backend import NAME as BACKEND
from .caustics import (
    CausticCurve,
    amplitude_A,
    caustic_lower,
    classify_region,
    trace_curves,
)
from .density import (
    ComplexPair,
    DensityPoint,
    ThreeExtrema,
    build_effpot_complex,
    build_effpot_three,
    density_point,
    fluctuation_factor,
    rho_improved,
    rho_usual,
    solve_xi,
    steepest_descent_sum,
)
from .errors import (
    BranchError,
    CausticError,
    ConvergenceError,
    DomainError,
    DwCausticError,
    GridTooSmall,
    OrderingError,
    RegionError,
)
from .oracle import Grid, SpectralSolution, exact_rho_diag
from .trajectories import (
    Kind,
    PhysParams,
    TrajectorySolution,
    action,
    dq0_dqt,
    find_complex_pair,
    find_real_turning_points,
    fluct_det,
    periodic_saddle,
    q0_of_qt,
)

__version__ = "0.1.0"

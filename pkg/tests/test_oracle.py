import math

import numpy as np
import pytest

from dwcaustic.errors import DomainError, GridTooSmall
from dwcaustic.oracle import Grid, exact_rho_diag, harmonic_rho_diag
from dwcaustic.trajectories import PhysParams


def _harmonic(q):
    return 0.5 * q * q


def test_grid_defaults_and_validation():
    grid = Grid()
    assert grid.nodes[0] == -4.0 and grid.nodes[-1] == 4.0
    assert grid.spacing == pytest.approx(8.0 / 2047)
    with pytest.raises(DomainError):
        Grid(1.0, -1.0)
    with pytest.raises(DomainError):
        Grid(n_points=4)


@pytest.mark.parametrize("order, tol", [(2, 1e-5), (4, 1e-9)])
def test_harmonic_self_test(order, tol):
    g, theta = 0.3, 2.0
    sol = exact_rho_diag(PhysParams(g, theta), potential_fn=_harmonic, order=order)
    q = np.linspace(-1, 1, 21)
    want = harmonic_rho_diag(q, theta, g)
    assert np.max(np.abs(sol.density_at(q) / want - 1)) < tol


def test_harmonic_spectrum():
    sol = exact_rho_diag(PhysParams(0.3, 0.5), Grid(-8, 8, 2048), potential_fn=_harmonic,
                         order=4)
    assert sol.energies[:5] == pytest.approx(np.arange(5) + 0.5, abs=1e-7)


def test_high_temperature_limit():
    g, theta = 0.3, 0.2
    sol = exact_rho_diag(PhysParams(g, theta), Grid(-6, 6, 2048))
    classical = (2 * math.pi * g * theta) ** -0.5 * math.exp(-theta / (4 * g))
    assert sol.density_at(0.0) == pytest.approx(classical, rel=0.02)


def test_trace_identity():
    sol = exact_rho_diag(PhysParams(0.3, 2.0))
    assert np.sum(sol.densities) * sol.grid.spacing == pytest.approx(sol.trace, rel=1e-8)


def test_dropped_states_negligible():
    sol = exact_rho_diag(PhysParams(0.3, 2.0))
    assert sol.theta * (sol.energies[-1] - sol.energies[0]) <= 40.0
    assert math.exp(-sol.theta * (sol.energies[-1] - sol.energies[0])) > 0


def test_orthonormal_eigenvectors():
    from scipy.linalg import eigh_tridiagonal
    grid = Grid()
    q, h = grid.nodes, grid.spacing
    g = 0.3
    k = 0.5 * g
    _, vecs = eigh_tridiagonal((q * q - 1) ** 2 / 4 / g + 2 * k / h / h,
                               np.full(q.size - 1, -k / h / h),
                               select="i", select_range=(0, 19))
    assert np.max(np.abs(vecs.T @ vecs - np.eye(20))) < 1e-10


def test_parity():
    sol = exact_rho_diag(PhysParams(0.3, 3.0), order=4)
    assert np.max(np.abs(sol.densities - sol.densities[::-1])) < 1e-10 * sol.densities.max()


def test_grid_too_small():
    with pytest.raises(GridTooSmall):
        exact_rho_diag(PhysParams(0.3, 2.0), Grid(-1.2, 1.2, 256))


def test_bad_order():
    with pytest.raises(DomainError):
        exact_rho_diag(PhysParams(0.3, 2.0), order=3)


def test_tunnel_splitting_shrinks_with_g():
    splits = []
    for g in (0.3, 0.2, 0.1):
        e = exact_rho_diag(PhysParams(g, 0.5), order=4).energies
        splits.append(e[1] - e[0])
    assert splits[0] > splits[1] > splits[2] > 0


def test_order_four_grid_refinement():
    params = PhysParams(0.3, math.pi)
    coarse = exact_rho_diag(params, Grid(n_points=2048), order=4)
    fine = exact_rho_diag(params, Grid(n_points=4095), order=4)
    q = np.linspace(-1.5, 1.5, 61)
    diff = np.abs(coarse.density_at(q) - fine.density_at(q)).max()
    assert diff < 1e-8 * fine.densities.max()


def test_reference_at_pi():
    sol = exact_rho_diag(PhysParams(0.3, math.pi), order=4)
    # values the command-line example reproduces
    assert sol.density_at(0.2) == pytest.approx(0.0660977, rel=1e-5)
    assert sol.density_at(0.5) == pytest.approx(0.1070011, rel=1e-5)

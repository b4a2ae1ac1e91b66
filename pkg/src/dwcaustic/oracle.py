"""Exact diagonal thermal density from a finite-difference spectrum.

The dimensionless Hamiltonian is ``h = -(g/2) d^2/dq^2 + U(q)/g`` with
``beta H = Theta h``; the density ``rho(q) = sum_n |psi_n(q)|^2 exp(-Theta e_n)``
is directly comparable with the semiclassical densities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.linalg import eig_banded, eigh_tridiagonal

from .errors import DomainError, GridTooSmall
from .trajectories import PhysParams, potential

__all__ = ["Grid", "SpectralSolution", "exact_rho_diag", "harmonic_rho_diag"]

# states with Theta*(e_n - e_0) above this are dropped (weight < 1e-17)
BOLTZMANN_CUT = 40.0
BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class Grid:
    """Uniform grid of ``n_points`` interior nodes; Dirichlet walls sit one
    spacing outside ``[q_min, q_max]``."""

    q_min: float = -4.0
    q_max: float = 4.0
    n_points: int = 2048

    def __post_init__(self):
        if not self.q_max > self.q_min:
            raise DomainError("grid needs q_max > q_min")
        if self.n_points < 8:
            raise DomainError("grid needs at least 8 points")

    @property
    def nodes(self):
        return np.linspace(self.q_min, self.q_max, self.n_points)

    @property
    def spacing(self):
        return (self.q_max - self.q_min) / (self.n_points - 1)


@dataclass(frozen=True)
class SpectralSolution:
    energies: np.ndarray
    q: np.ndarray
    densities: np.ndarray
    grid: Grid
    theta: float
    g: float
    _spline: CubicSpline = field(repr=False, compare=False, default=None)

    def density_at(self, q0):
        """Interpolated density (cubic spline between grid nodes)."""
        if self._spline is None:
            object.__setattr__(self, "_spline", CubicSpline(self.q, self.densities))
        out = self._spline(q0)
        return float(out) if np.ndim(out) == 0 else out

    @property
    def trace(self):
        """Partition function ``sum_n exp(-Theta e_n)`` of retained states."""
        return float(np.exp(-self.theta * self.energies).sum())


def _eigensystem(diag, h, kinetic, order, count):
    if order == 2:
        off = np.full(diag.size - 1, -kinetic / (h * h))
        return eigh_tridiagonal(diag + 2.0 * kinetic / (h * h), off,
                                select="i", select_range=(0, count - 1))
    if order == 4:
        # 5-point stencil: (-f[i-2] + 16 f[i-1] - 30 f[i] + 16 f[i+1] - f[i+2]) / 12h^2
        c = kinetic / (12.0 * h * h)
        bands = np.zeros((3, diag.size))
        bands[0] = diag + 30.0 * c
        bands[1, :-1] = -16.0 * c
        bands[2, :-2] = c
        return eig_banded(bands, lower=True, select="i",
                          select_range=(0, count - 1))
    raise DomainError(f"finite-difference order must be 2 or 4, got {order}")


def exact_rho_diag(params: PhysParams, grid: Grid | None = None, potential_fn=None,
                   order: int = 2, max_states: int | None = None):
    """Spectral density for coupling ``params.g`` at ``params.theta``.

    ``potential_fn`` replaces the double well ``U(q)`` (test hook; it is
    divided by ``g`` like ``U``).  Raises :class:`GridTooSmall` when the
    density at the walls exceeds ``1e-12`` of its maximum.
    """
    grid = grid or Grid()
    g, theta = params.g, params.theta
    q = grid.nodes
    h = grid.spacing
    u = (potential_fn or potential)(q)
    diag = np.asarray(u, dtype=float) / g
    kinetic = 0.5 * g
    count = max_states or grid.n_points
    count = min(count, grid.n_points)
    # size the eigensolve from the full spectrum of the tridiagonal operator
    off = np.full(q.size - 1, -kinetic / (h * h))
    evals = eigh_tridiagonal(diag + 2.0 * kinetic / (h * h), off, eigvals_only=True)
    keep = int(np.searchsorted(evals, evals[0] + BOLTZMANN_CUT / theta, side="right"))
    count = min(count, keep + (8 if order == 4 else 0), grid.n_points)
    energies, vecs = _eigensystem(diag, h, kinetic, order, max(count, 1))
    keep = int(np.searchsorted(energies, energies[0] + BOLTZMANN_CUT / theta,
                               side="right"))
    energies, vecs = energies[:keep], vecs[:, :keep]
    weights = np.exp(-theta * energies)
    dens = (vecs * vecs * weights).sum(axis=1) / h
    peak = dens.max()
    edge = max(dens[0], dens[-1])
    if edge > BOUNDARY_TOL * peak:
        raise GridTooSmall(f"boundary density {edge / peak:.3g} of peak; widen the grid")
    return SpectralSolution(energies, q, dens, grid, theta, g)


def harmonic_rho_diag(q, theta, g):
    """Closed-form density of ``-(g/2) d^2 + q^2/(2g)`` (unit frequency)."""
    q = np.asarray(q, dtype=float)
    return (2.0 * math.pi * g * math.sinh(theta)) ** -0.5 * np.exp(
        -q * q * math.tanh(0.5 * theta) / g
    )

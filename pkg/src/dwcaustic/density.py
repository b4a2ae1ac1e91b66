"""Diagonal thermal density in the usual and the improved semiclassical
approximations.

All exponents are in units of ``I/g`` (``S/hbar = I/g``).  The improved
density replaces the Gaussian integral over the softest fluctuation mode by
the integral of an effective quartic potential whose extrema reproduce the
actions of the classical solutions:

* three real extrema (global minimum, local minimum, lowest saddle)::

      V3(z) = mu [xi z^2/2 - (1+xi) z^3/3 + z^4/4],   1 <= xi <= 2

* one real extremum plus a complex pair::

      V1(z) = chi [z^2/2 - (2 cos(phi)/3) z^3 + z^4/4],   0 <= phi <= pi/2
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from scipy.integrate import quad
from scipy.optimize import brentq

from .errors import BranchError, ConvergenceError, DomainError, OrderingError
from .trajectories import (
    Kind,
    find_complex_pair,
    find_real_turning_points,
    periodic_amplitude,
    periodic_saddle,
)

__all__ = [
    "ThreeExtrema",
    "ComplexPair",
    "Contribution",
    "DensityPoint",
    "solve_xi",
    "build_effpot_three",
    "build_effpot_complex",
    "fluctuation_factor",
    "density_point",
    "rho_usual",
    "rho_improved",
    "steepest_descent_sum",
]

CAUSTIC_DET = 1e-8
QUAD_RTOL = 1e-11
# exp(-CUTOFF) is negligible next to the integrand maximum exp(0) = 1
CUTOFF = 40.0
# half-width of the neighbourhood of the (0, pi) cusp that is bridged
CUSP_BAND_THETA = 1e-5
CUSP_BAND_Q0 = 1e-7
CUSP_STEP = 2e-4


@dataclass(frozen=True)
class ThreeExtrema:
    xi: float
    mu: float

    def __call__(self, z):
        xi = self.xi
        return self.mu * (xi * z * z / 2.0 - (1.0 + xi) * z ** 3 / 3.0 + z ** 4 / 4.0)

    @property
    def curvature(self):
        return self.mu * self.xi

    @property
    def extrema(self):
        return (0.0, 1.0, self.xi)


@dataclass(frozen=True)
class ComplexPair:
    chi: float
    phi: float

    def __call__(self, z):
        c = 2.0 * math.cos(self.phi) / 3.0
        return self.chi * (z * z / 2.0 - c * z ** 3 + z ** 4 / 4.0)

    @property
    def curvature(self):
        return self.chi

    @property
    def extrema(self):
        # only z = 0 is a real extremum; cos(phi) marks the flattest stretch
        return (0.0, math.cos(self.phi))


@dataclass(frozen=True)
class Contribution:
    label: str
    q_t: complex
    action: complex
    det_delta: float | None
    weight: float | None


@dataclass(frozen=True)
class DensityPoint:
    """Densities at one ``(q0, Theta, g)``; ``rho_usual`` is ``inf`` on a
    caustic."""

    q0: float
    theta: float
    g: float
    n_solutions: int
    rho_usual: float | None
    rho_improved: float | None
    F_factor: float | None
    effpot: ThreeExtrema | ComplexPair | None
    contributions: tuple = ()


# ---------------------------------------------------------------------------
# effective potentials


def _xi_ratio(xi):
    return xi ** 3 * (2.0 - xi) / (2.0 * xi - 1.0)


def _xi_complement(xi):
    # 1 - ratio, without cancellation near xi = 1
    return (xi - 1.0) ** 3 * (xi + 1.0) / (2.0 * xi - 1.0)


def solve_xi(ratio, complement=None):
    """Root ``xi`` in [1, 2] of ``xi^3 (2 - xi) / (2 xi - 1) = ratio``.

    ``complement = 1 - ratio`` may be given instead of ``ratio`` near the
    coalescence end, where ``xi - 1 ~ (1 - ratio)^(1/3)`` would otherwise lose
    two thirds of the digits.
    """
    if complement is not None:
        if not 0.0 <= complement <= 1.0:
            raise DomainError(f"complement must lie in [0, 1], got {complement!r}")
        if complement == 0.0:
            return 1.0
        if complement == 1.0:
            return 2.0
        return brentq(lambda x: _xi_complement(x) - complement, 1.0, 2.0,
                      xtol=1e-15, rtol=8.9e-16)
    if not 0.0 <= ratio <= 1.0:
        raise DomainError(f"ratio must lie in [0, 1], got {ratio!r}")
    if ratio == 1.0:
        return 1.0
    if ratio == 0.0:
        return 2.0
    return brentq(lambda x: _xi_ratio(x) - ratio, 1.0, 2.0,
                  xtol=1e-15, rtol=8.9e-16)


def build_effpot_three(I_gm, I_lm, I_sp, g, slack=1e-12):
    """``V3`` whose minima at 0 and ``xi`` and maximum at 1 reproduce the
    global-minimum, local-minimum and saddle actions."""
    if not g > 0:
        raise DomainError(f"g must be positive, got {g!r}")
    span = I_sp - I_gm
    if not span > 0 or I_lm < I_gm - slack or I_lm > I_sp + slack:
        raise OrderingError(
            f"need I_gm <= I_lm <= I_sp with I_gm < I_sp, got {I_gm}, {I_lm}, {I_sp}"
        )
    low = min(max(I_lm - I_gm, 0.0), span)
    high = min(max(I_sp - I_lm, 0.0), span)
    if low <= high:
        xi = solve_xi(low / span)
    else:
        xi = solve_xi(None, complement=high / span)
    mu = 12.0 * span / (g * (2.0 * xi - 1.0))
    return ThreeExtrema(xi, mu)


def _arg_h(phi):
    # arg(2 e^{2i phi} - e^{4i phi}), increasing from 0 to pi on [0, pi/2]
    return 3.0 * phi - math.atan2(3.0 * math.sin(phi), math.cos(phi))


def build_effpot_complex(I_gm, I_ct, g):
    """``V1`` whose complex extrema reproduce the action of the complex pair.

    Solves ``(I_ct - I_gm)/g = (chi/12)(2 e^{2i phi} - e^{4i phi})`` for real
    ``chi > 0`` and ``phi`` in ``[0, pi/2]``; either member of the conjugate
    pair may be passed.
    """
    if not g > 0:
        raise DomainError(f"g must be positive, got {g!r}")
    d = complex(I_ct - I_gm) / g
    if d.imag < 0:
        d = d.conjugate()
    if d == 0:
        raise BranchError("complex action coincides with the global minimum")
    target = cmath.phase(d)
    if d.imag == 0.0:
        phi = 0.0 if d.real > 0 else 0.5 * math.pi
    else:
        phi = brentq(lambda p: _arg_h(p) - target, 0.0, 0.5 * math.pi,
                     xtol=1e-15, rtol=8.9e-16)
    h = 2.0 * cmath.exp(2j * phi) - cmath.exp(4j * phi)
    chi = (12.0 * d / h).real
    if not chi > 0:
        raise BranchError(f"negative chi={chi}: complex pair misidentified")
    return ComplexPair(chi, phi)


def _edge(v, start, direction):
    z = start
    if v(z) >= CUTOFF:
        return z
    width = 1.0
    while v(z + direction * width) < CUTOFF:
        width *= 2.0
        if width > 1e8:
            raise ConvergenceError("effective potential does not confine")
    return brentq(lambda t: v(t) - CUTOFF, z, z + direction * width, xtol=1e-12)


def fluctuation_factor(effpot, rtol=None):
    """``F = sqrt(V''(0)/2 pi) * integral exp(-V(z)) dz``.

    Equals 1 when ``V`` is purely quadratic and stays finite at coalescence.
    """
    if not effpot.curvature > 0:
        raise DomainError("effective potential needs positive curvature at 0")
    rtol = QUAD_RTOL if rtol is None else rtol
    pts = sorted(set(effpot.extrema))
    lo = _edge(effpot, pts[0], -1.0)
    hi = _edge(effpot, pts[-1], 1.0)
    nodes = [lo] + pts + [hi]
    total = 0.0
    err = 0.0
    for a, b in zip(nodes[:-1], nodes[1:]):
        if b <= a:
            continue
        val, e = quad(lambda z: math.exp(-effpot(z)), a, b,
                      epsabs=0.0, epsrel=rtol, limit=200)
        total += val
        err += e
    if not err <= 1e-8 * total:
        raise ConvergenceError(f"fluctuation integral error {err:.3g} of {total:.3g}")
    return math.sqrt(effpot.curvature / (2.0 * math.pi)) * total


# ---------------------------------------------------------------------------
# densities


def _weight(sol, g):
    d = sol.det_delta
    if d is None or d <= 0 or abs(d) < CAUSTIC_DET:
        return None
    return math.exp(-sol.action.real / g) / math.sqrt(d)


def _contribution(sol, g):
    return Contribution(sol.label, sol.q_t, sol.action, sol.det_delta, _weight(sol, g))


def _usual(sols, g):
    total = 0.0
    for s in sols:
        if s.kind in (Kind.GLOBAL_MIN, Kind.LOCAL_MIN):
            if abs(s.det_delta) < CAUSTIC_DET:
                return math.inf
            total += math.exp(-s.action.real / g) / math.sqrt(s.det_delta)
    if len(sols) % 2 == 0:
        # two roots only on the caustic itself
        return math.inf
    return total


def _lowest_saddle(q0, theta, sols):
    if theta >= 2.0 * math.pi and abs(q0) < periodic_amplitude(theta):
        return periodic_saddle(q0, theta)
    inner = sols[1:-1]
    ones = [s for s in inner if s.saddle_index == 1]
    return min(ones or inner, key=lambda s: s.action_excess.real)


def _improved(q0, theta, g, sols):
    """Return ``(rho, F, effpot, extra solutions)``."""
    gm = next(s for s in sols if s.kind is Kind.GLOBAL_MIN)
    if len(sols) == 1:
        upper, lower = find_complex_pair(q0, theta, g)
        eff = build_effpot_complex(gm.action_excess, upper.action_excess, g)
        extra = (upper, lower)
    else:
        lm = next(s for s in sols if s is not gm and s.kind is not Kind.SADDLE)
        if len(sols) == 2:
            sp = lm
        else:
            sp = _lowest_saddle(q0, theta, sols)
        e_gm = gm.action_excess.real
        e_lm = lm.action_excess.real
        e_sp = max(sp.action_excess.real, e_lm)
        eff = build_effpot_three(e_gm, e_lm, e_sp, g)
        extra = (sp,) if sp.branch_index == -1 else ()
    f = fluctuation_factor(eff)
    rho = math.exp(-gm.action.real / g) / math.sqrt(gm.det_delta) * f
    return rho, f, eff, extra


def density_point(q0, theta, g, usual=True, improved=True):
    """Evaluate both densities and their ingredients at one point."""
    if not abs(q0) < 1.0:
        raise DomainError(f"|q0| must be < 1, got {q0!r}")
    if not (math.isfinite(g) and g > 0):
        raise DomainError(f"g must be positive, got {g!r}")
    if abs(theta - math.pi) < CUSP_BAND_THETA and abs(q0) < CUSP_BAND_Q0:
        return _bridge_cusp(q0, theta, g, usual, improved)
    sols = find_real_turning_points(q0, theta, g)
    rho_u = _usual(sols, g) if usual else None
    rho_i = f = eff = None
    extra = ()
    if improved:
        rho_i, f, eff, extra = _improved(q0, theta, g, sols)
    contribs = tuple(_contribution(s, g) for s in tuple(sols) + tuple(extra))
    return DensityPoint(q0, theta, g, len(sols), rho_u, rho_i, f, eff, contribs)


def _bridge_cusp(q0, theta, g, usual, improved):
    # every solution coalesces at (0, pi) and Delta_gm vanishes; the improved
    # density is smooth there, so take the mean of two symmetric neighbours
    below = density_point(q0, math.pi - CUSP_STEP, g, False, improved)
    above = density_point(q0, math.pi + CUSP_STEP, g, False, improved)
    rho_i = f = None
    if improved:
        rho_i = 0.5 * (below.rho_improved + above.rho_improved)
        f = 0.5 * (below.F_factor + above.F_factor)
    sols = find_real_turning_points(q0, theta, g)
    rho_u = math.inf if usual else None
    return DensityPoint(q0, theta, g, len(sols), rho_u, rho_i, f, None,
                        tuple(_contribution(s, g) for s in sols))


def rho_usual(q0, theta, g):
    """Sum of ``exp(-I/g) Delta^(-1/2)`` over the minima."""
    return density_point(q0, theta, g, usual=True, improved=False)


def rho_improved(q0, theta, g):
    """Global-minimum weight times the quartic fluctuation factor."""
    return density_point(q0, theta, g, usual=True, improved=True)


def steepest_descent_sum(q0, theta, g):
    """Steepest-descent value of the improved density in the three-solution
    region: both minima of ``V3`` evaluated in Gaussian approximation."""
    pt = density_point(q0, theta, g, usual=False, improved=True)
    eff = pt.effpot
    if not isinstance(eff, ThreeExtrema) or eff.xi <= 1.0:
        raise DomainError("steepest-descent sum needs two separated minima")
    gm = next(c for c in pt.contributions if c.label == Kind.GLOBAL_MIN.value)
    lm = next(c for c in pt.contributions if c.label == Kind.LOCAL_MIN.value)
    base = math.exp(-gm.action.real / g) / math.sqrt(gm.det_delta)
    ratio = math.exp(-(lm.action.real - gm.action.real) / g) / math.sqrt(eff.xi - 1.0)
    return base * (1.0 + ratio)

"""Classical boundary-value problem of the quartic double well.

Dimensionless units: ``q = x/a``, ``theta = omega*tau``, potential
``U(q) = (q**2 - 1)**2 / 4`` and action ``S/hbar = I/g``.  A symmetric
Euclidean trajectory returning to ``q0`` after time ``Theta`` is labelled by
its turning point ``q_t`` (reached at ``Theta/2``)::

    q0 = q_t * cd(u, k),   u = (Theta/2) sqrt(1 - q_t**2/2),
    k**2 = q_t**2 / (2 - q_t**2)

Everything the semiclassical densities need (action, fluctuation
determinant) is a function of ``q_t`` alone.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from . import _backend
from .errors import (
    BranchError,
    CausticError,
    ConvergenceError,
    DomainError,
    RegionError,
)
from .specfun import legendre_E, legendre_E_inc, legendre_F, legendre_K

__all__ = [
    "PhysParams",
    "Kind",
    "TrajectorySolution",
    "potential",
    "q0_of_qt",
    "dq0_dqt",
    "derivative_zeros",
    "monotonic_branches",
    "fold_points",
    "find_real_turning_points",
    "imaginary_turning_points",
    "find_complex_pair",
    "action",
    "action_closed_form",
    "fluct_det",
    "periodic_amplitude",
    "periodic_saddle",
]

ROOT_XTOL = 1e-15
RESIDUAL_TOL = 1e-10
QT_EDGE = 1.0 - 1e-15
# continuation in Theta starts this far below the first cusp
CUSP_OFFSET = 0.05


@dataclass(frozen=True)
class PhysParams:
    """Dimensionless coupling ``g = hbar*lambda/(m**2 omega**3)`` and inverse
    temperature ``theta = beta*hbar*omega``."""

    g: float
    theta: float

    def __post_init__(self):
        for name in ("g", "theta"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be positive and finite, got {v!r}")


class Kind(Enum):
    GLOBAL_MIN = "GlobalMin"
    LOCAL_MIN = "LocalMin"
    SADDLE = "Saddle"
    COMPLEX = "ComplexPair"


@dataclass(frozen=True)
class TrajectorySolution:
    """One extremum of the action with endpoint ``q0``.

    ``action_excess`` is ``I - theta/4``; it is carried instead of ``I``
    itself so that differences between nearby actions do not cancel.
    ``det_delta`` is the fluctuation determinant at the coupling the
    solution was computed for, or ``None`` for complex and periodic orbits.
    """

    q_t: complex
    q0: float
    theta: float
    action_excess: complex
    det_delta: float | None
    kind: Kind
    saddle_index: int = 0
    branch_index: int = 0

    @property
    def action(self) -> complex:
        return self.theta / 4.0 + self.action_excess

    @property
    def is_real(self) -> bool:
        return self.q_t.imag == 0.0

    @property
    def label(self) -> str:
        if self.kind is Kind.SADDLE:
            return f"Saddle({self.saddle_index})"
        return self.kind.value

    def negated(self) -> "TrajectorySolution":
        """Parity image ``q -> -q`` (same action and determinant)."""
        return TrajectorySolution(
            q_t=-self.q_t,
            q0=-self.q0,
            theta=self.theta,
            action_excess=self.action_excess,
            det_delta=self.det_delta,
            kind=self.kind,
            saddle_index=self.saddle_index,
            branch_index=self.branch_index,
        )


def potential(q):
    """U(q) = (q^2 - 1)^2 / 4."""
    return 0.25 * (q * q - 1.0) ** 2


def _check_theta(theta):
    if not (math.isfinite(theta) and theta > 0):
        raise DomainError(f"Theta must be positive and finite, got {theta!r}")


def _check_qt(q_t):
    z = complex(q_t)
    if not cmath.isfinite(z):
        raise DomainError(f"non-finite turning point {q_t!r}")
    if z.imag == 0.0 and abs(z.real) >= 1.0:
        raise DomainError(f"real turning point |q_t| >= 1 (separatrix): {q_t!r}")
    if z * z == 2.0:
        raise DomainError("q_t**2 = 2 has zero frequency")
    return z


def q0_of_qt(q_t, theta):
    """Endpoint ``q0`` of the symmetric trajectory with turning point ``q_t``.

    Odd in ``q_t``.  Returns ``float`` for real ``q_t``.
    """
    _check_theta(theta)
    z = _check_qt(q_t)
    val = _backend.q0_of_qt(z, theta)
    if not isinstance(q_t, complex):
        return val.real
    return val


def _q0_real(x, theta):
    return _backend.q0_of_qt(x, theta).real


def _dq0_real(x, theta):
    # complex step: exact to rounding for the analytic kernel
    h = 1e-30
    return _backend.q0_of_qt(complex(x, h), theta).imag / h


def _dq0_complex(z, theta):
    # Richardson-extrapolated central differences
    h = 1e-3 * max(1.0, abs(z))
    f = _backend.q0_of_qt
    table = []
    for _ in range(4):
        table.append((f(z + h, theta) - f(z - h, theta)) / (2.0 * h))
        h *= 0.5
    for level in range(1, 4):
        fac = 4.0 ** level
        table = [(fac * table[i + 1] - table[i]) / (fac - 1.0)
                 for i in range(len(table) - 1)]
    return table[0]


def dq0_dqt(q_t, theta):
    """Derivative of ``q0`` with respect to ``q_t`` at fixed ``Theta``.

    Complex-step differentiation for real ``q_t``, Richardson-extrapolated
    central differences for complex ``q_t``.
    """
    _check_theta(theta)
    z = _check_qt(q_t)
    if z.imag == 0.0 and not isinstance(q_t, complex):
        return _dq0_real(z.real, theta)
    if z.imag == 0.0:
        return complex(_dq0_real(z.real, theta))
    return _dq0_complex(z, theta)


_SCAN = np.unique(np.concatenate([
    np.logspace(-8, math.log10(0.05), 160),
    np.linspace(0.05, 0.95, 541),
    1.0 - np.logspace(math.log10(0.05), -14, 240),
]))


@lru_cache(maxsize=512)
def derivative_zeros(theta):
    """Positive zeros of ``dq0/dq_t`` in (0, 1), ascending.

    The outermost zero belongs to the first caustic; each further zero was
    born at a later cusp ``Theta = (2j-1)*pi``.
    """
    _check_theta(theta)
    d = np.array([_dq0_real(x, theta) for x in _SCAN])
    zeros = []
    for i in np.nonzero(np.sign(d[:-1]) * np.sign(d[1:]) < 0)[0]:
        zeros.append(brentq(_dq0_real, _SCAN[i], _SCAN[i + 1], args=(theta,),
                            xtol=ROOT_XTOL, rtol=4 * np.finfo(float).eps))
    return tuple(zeros)


def monotonic_branches(theta):
    """Intervals of (-1, 1) on which ``q0(q_t)`` is monotonic, ascending."""
    z = derivative_zeros(theta)
    cuts = [-QT_EDGE] + [-x for x in reversed(z)] + list(z) + [QT_EDGE]
    return [(cuts[i], cuts[i + 1]) for i in range(len(cuts) - 1)]


def fold_points(theta):
    """Coalescence points ``(q_t~, q0~)`` with ``q0~ >= 0``, outermost first.

    Entry ``j`` lies on the fold caustic whose cusp is at ``(2j+1)*pi``.
    """
    out = []
    for x in reversed(derivative_zeros(theta)):
        out.append((x, abs(_q0_real(x, theta))))
    return out


def _det_reduced(x, theta):
    """Fluctuation determinant divided by the coupling ``g``.

    Gelfand-Yaglom form of the closed-form determinant with the endpoint
    speed written as ``-dq/dtheta(0)``, which keeps the correct sign beyond
    the first half-oscillation and has a finite ``q_t -> 0`` limit.
    """
    z = complex(x)
    q2 = z * z
    den = 2.0 - q2
    m = q2 / den
    mc = 2.0 * (1.0 - z) * (1.0 + z) / den
    omega = cmath.sqrt(1.0 - 0.5 * q2)
    sn, cn, dn = _backend.sncndn(0.5 * theta * omega, m, mc)
    val = 4.0 * math.pi * omega * mc * sn / (dn * dn * (1.0 - q2))
    return (val * _dq0_real(x, theta)).real


def fluct_det(q_t, q0, theta, g, tol=1e-8):
    """Determinant of the quadratic fluctuation operator about a real
    trajectory.

    Raises :class:`CausticError` when ``|Delta| < tol``.
    """
    _check_theta(theta)
    x = _check_qt(q_t)
    if x.imag != 0.0:
        raise DomainError("fluct_det needs a real turning point")
    _check_consistent(x, q0, theta)
    delta = g * _det_reduced(x.real, theta)
    if abs(delta) < tol:
        raise CausticError(f"|Delta|={abs(delta):.3g} below {tol:g}", delta)
    return delta


def _check_consistent(z, q0, theta, tol=1e-9):
    r = abs(_backend.q0_of_qt(z, theta) - q0)
    if r > tol:
        raise DomainError(f"q_t={z} does not reach q0={q0} (residual {r:.3g})")


# ---------------------------------------------------------------------------
# actions


def _closed_form_applies(z, q0, theta):
    if z.imag != 0.0 or abs(z.real) < 1e-3 or abs(q0) > abs(z.real):
        return False
    x = z.real
    mc = 2.0 * (1.0 - x) * (1.0 + x) / (2.0 - x * x)
    big_k = _backend.carlson_rf(0.0, mc, 1.0).real
    u = 0.5 * theta * math.sqrt(1.0 - 0.5 * x * x)
    return u <= 2.0 * big_k * (1.0 + 1e-12)


def action_closed_form(q_t, q0, theta):
    """Excess action ``I - Theta/4`` from the elliptic-integral closed form.

    Valid for real trajectories that reach the turning point without passing
    another one first (``u <= 2K``); the first square root changes sign when
    ``q0`` and ``q_t`` have opposite signs.
    """
    x = float(q_t)
    q0 = float(q0)
    if abs(q0) > abs(x):
        raise DomainError("closed form needs |q0| <= |q_t|")
    q2 = x * x
    k = math.sqrt(q2 / (2.0 - q2))
    phi = math.asin(max(-1.0, min(1.0, q0 / x)))
    root = math.sqrt(max(0.0, 2.0 * q0 * q0 * (q2 - q0 * q0) * (2.0 - q2 - q0 * q0)))
    if q0 * x < 0:
        root = -root
    ell = ((1.0 - q2) * (legendre_K(k) - legendre_F(phi, k))
           - legendre_E(k) + legendre_E_inc(phi, k))
    return (0.25 * theta * q2 * (q2 - 2.0) - root / 3.0
            - 2.0 / 3.0 * math.sqrt(2.0 * (2.0 - q2)) * ell)


def _excess(z, q0, theta):
    if _closed_form_applies(z, q0, theta):
        return complex(action_closed_form(z.real, q0, theta))
    return _backend.action_excess(z, theta)


def action(q_t, q0, theta, check=False):
    """Dimensionless action ``I[q_c]`` of the trajectory with turning point
    ``q_t`` and endpoint ``q0``.

    Uses the elliptic closed form where it is single valued and the
    Euclidean-time quadrature elsewhere (complex ``q_t``, trajectories that
    pass a turning point before ``Theta/2``).  With ``check=True`` both are
    evaluated where the closed form applies and :class:`BranchError` is
    raised if they differ by more than 1e-7.
    """
    _check_theta(theta)
    z = _check_qt(q_t)
    _check_consistent(z, q0, theta)
    val = _excess(z, q0, theta)
    if check and _closed_form_applies(z, q0, theta):
        quad = _backend.action_excess(z, theta)
        if abs(quad - val) > 1e-7:
            raise BranchError(f"closed form {val} vs quadrature {quad}")
    if z.imag == 0.0:
        val = complex(val.real)
    return theta / 4.0 + val


# ---------------------------------------------------------------------------
# real turning points


def _classify(roots, excess, dets, branches):
    n = len(roots)
    kinds = [Kind.SADDLE] * n
    index = [0] * n
    if n == 1:
        kinds[0] = Kind.GLOBAL_MIN
        return kinds, index
    top, bottom = 0, n - 1
    a, b = excess[top], excess[bottom]
    if a < b or (a == b and roots[top] > 0):
        gm, lm = top, bottom
    else:
        gm, lm = bottom, top
    kinds[gm] = Kind.GLOBAL_MIN
    kinds[lm] = Kind.LOCAL_MIN
    for i in range(1, n - 1):
        base = min(i, n - 1 - i)
        # parity of the Morse index follows the sign of the determinant
        if dets[i] > 0 and base % 2 == 1:
            base += 1
        elif dets[i] < 0 and base % 2 == 0:
            base += 1
        index[i] = base
    return kinds, index


def _real_roots(q0, theta):
    roots, branch_of = [], []
    for j, (a, b) in enumerate(monotonic_branches(theta)):
        fa = _q0_real(a, theta) - q0
        fb = _q0_real(b, theta) - q0
        if fa == 0.0:
            r = a
        elif fb == 0.0:
            r = b
        elif fa * fb < 0:
            r = brentq(lambda x: _q0_real(x, theta) - q0, a, b,
                       xtol=ROOT_XTOL, rtol=4 * np.finfo(float).eps)
        else:
            continue
        if roots and abs(r - roots[-1]) < 1e-12:
            continue
        roots.append(r)
        branch_of.append(j)
    return roots, branch_of


def find_real_turning_points(q0, theta, g=1.0):
    """All real turning points with endpoint ``q0``, by descending ``q_t``.

    Roots are bracketed on the monotonic branches of ``q0(q_t)``.  The two
    outermost roots are the minima (lower action is the global one; at
    ``q0 = 0`` the positive root wins the tie); inner roots are saddles.
    ``det_delta`` is evaluated at coupling ``g``.
    """
    _check_theta(theta)
    if not abs(q0) < 1.0:
        raise DomainError(f"|q0| must be < 1, got {q0!r}")
    if q0 < 0:
        return [s.negated() for s in find_real_turning_points(-q0, theta, g)][::-1]
    q0 = abs(float(q0))
    roots, branch_of = _real_roots(q0, theta)
    order = sorted(range(len(roots)), key=lambda i: -roots[i])
    roots = [roots[i] for i in order]
    branch_of = [branch_of[i] for i in order]
    excess = [_excess(complex(r), q0, theta).real for r in roots]
    dets = [g * _det_reduced(r, theta) for r in roots]
    kinds, index = _classify(roots, excess, dets, branch_of)
    return [
        TrajectorySolution(
            q_t=complex(r), q0=q0, theta=theta, action_excess=complex(e),
            det_delta=d, kind=k, saddle_index=n, branch_index=b,
        )
        for r, e, d, k, n, b in zip(roots, excess, dets, kinds, index, branch_of)
    ]


# ---------------------------------------------------------------------------
# complex turning points


def _imag_residual(xi, theta, order):
    kk = _backend.carlson_rf(0.0, 1.0 - xi * xi / (2.0 * (1.0 + xi * xi)), 1.0).real
    return 0.5 * theta * math.sqrt(1.0 + xi * xi) - (2 * order - 1) * kk


def imaginary_turning_points(theta, count=1):
    """Positive ``xi`` with ``q0(i*xi, Theta) = 0``, ascending.

    These are the zeros of ``xi * cn((Theta/2) sqrt(1+xi^2), xi/sqrt(2(1+xi^2)))``;
    only zeros still off the real axis at this ``Theta`` are returned.
    """
    _check_theta(theta)
    out = []
    order = 1
    while len(out) < count:
        if 0.5 * theta < (2 * order - 1) * 0.5 * math.pi:
            hi = 4.0 * (2 * order - 1) * 1.9 / theta + 4.0
            out.append(brentq(_imag_residual, 0.0, hi, args=(theta, order),
                              xtol=ROOT_XTOL, rtol=4 * np.finfo(float).eps))
        order += 1
    return out


def _newton(f, z, tol=1e-14, maxit=10):
    for it in range(maxit):
        fz = f(z)
        if abs(fz) <= tol:
            return z, it
        h = 1e-7 * (1.0 + abs(z))
        d = (f(z + h) - f(z - h)) / (2.0 * h)
        if d == 0:
            return None, it
        z = z - fz / d
    return (z, maxit) if abs(f(z)) <= 10 * tol else (None, maxit)


def _track(residual, z, p0, p1, step=1e-3, max_step=0.05, min_step=1e-13):
    """Follow the upper-half-plane root of ``residual(z, p) = 0`` from
    ``p0`` to ``p1``."""
    p = p0
    prev = None
    h = step if p1 > p0 else -step
    while p != p1:
        pn = p + h
        if (h > 0 and pn >= p1) or (h < 0 and pn <= p1):
            pn = p1
        if prev is not None:
            pp, zp = prev
            guess = z + (z - zp) * (pn - p) / (p - pp)
        else:
            guess = z
        zn, its = _newton(lambda w: residual(w, pn), guess, maxit=8)
        bad = zn is None or zn.imag <= 0.0
        if not bad and prev is not None:
            # the corrector should stay well inside one step of the predictor
            bad = abs(zn - guess) > 0.5 * abs(guess - z) + 1e-12
        if bad:
            h *= 0.5
            if abs(h) < min_step:
                raise ConvergenceError("complex-pair continuation stalled",
                                       last_good=(p, z))
            continue
        prev = (p, z)
        p, z = pn, zn
        if its <= 3:
            h = math.copysign(min(abs(h) * 1.5, max_step), h)
    return z


def _polish(z, q0, theta):
    zn, _ = _newton(lambda w: _backend.q0_of_qt(w, theta) - q0, z)
    if zn is None or zn.imag <= 0.0 or abs(_backend.q0_of_qt(zn, theta) - q0) > RESIDUAL_TOL:
        raise ConvergenceError("complex turning point did not converge",
                               last_good=(q0, z))
    return zn


def _root_from_axis(q0, theta):
    if q0 == 0.0:
        return 1j * imaginary_turning_points(theta)[0]
    start = min(theta, math.pi - CUSP_OFFSET)
    z = 1j * imaginary_turning_points(start)[0]
    z = _track(lambda w, p: _backend.q0_of_qt(w, start) - p, z, 0.0, q0)
    if theta > start:
        z = _track(lambda w, p: _backend.q0_of_qt(w, p) - q0, z, start, theta)
    return _polish(z, q0, theta)


def _root_from_fold(q0, theta, offset=1e-8):
    x = derivative_zeros(theta)[-1]
    # the pair for q0 > 0 is born where the fold value is positive
    if _q0_real(x, theta) < 0:
        x = -x
    fold = _q0_real(x, theta)
    h = 1e-5
    curv = (_dq0_real(x + h, theta) - _dq0_real(x - h, theta)) / (2.0 * h)
    # the root moves like sqrt(q0 - fold): continue in s = sqrt(q0 - fold)
    s0 = math.sqrt(min(q0 - fold, offset))
    w = cmath.sqrt(2.0 / curv) * s0
    z = complex(x, 0.0) + (w if w.imag > 0 else -w)
    z = _polish(z, fold + s0 * s0, theta)
    s1 = math.sqrt(q0 - fold)
    if s1 > s0:
        z = _track(lambda w, p: _backend.q0_of_qt(w, theta) - (fold + p * p),
                   z, s0, s1, step=1e-4)
    return _polish(z, q0, theta)


def first_caustic(theta):
    """Endpoint ``q0~ >= 0`` of the first caustic, or ``None`` for
    ``Theta <= pi``."""
    pts = fold_points(theta)
    return pts[0][1] if pts else None


def find_complex_pair(q0, theta, g=1.0, route="auto"):
    """Complex-conjugate turning points that continue the coalesced
    local-minimum/saddle pair into the one-solution region.

    Two continuation routes, neither of which crosses the first caustic:

    ``"fold"``
        start at the coalescence point on the first caustic, step off it
        along the local square-root expansion and continue in ``q0``;
        needs ``Theta > pi``.
    ``"axis"``
        start at the imaginary-axis zero ``i*xi_1`` at ``q0 = 0`` (at a
        temperature below the first cusp if needed), continue along ``q0``,
        then along ``Theta``.

    ``"auto"`` takes the fold route whenever a caustic exists.  Returns
    ``(upper, lower)`` with ``Im(upper.q_t) > 0``.
    """
    _check_theta(theta)
    if not abs(q0) < 1.0:
        raise DomainError(f"|q0| must be < 1, got {q0!r}")
    qc = first_caustic(theta)
    a = abs(float(q0))
    if qc is not None and a <= qc:
        raise RegionError(f"(q0={q0}, Theta={theta}) is inside the first caustic")
    if a == 0.0 and theta >= math.pi:
        raise RegionError("q0 = 0 at Theta >= pi has three real solutions")
    if route == "auto":
        route = "fold" if qc is not None and a > 0.0 else "axis"
    if route == "fold":
        if qc is None:
            raise RegionError("fold route needs Theta above the first cusp")
        z = _root_from_fold(a, theta)
    elif route == "axis":
        z = _root_from_axis(a, theta)
    else:
        raise ValueError(f"unknown route {route!r}")
    if q0 < 0:
        z = -z.conjugate()
    exc = _backend.action_excess(z, theta)
    upper = TrajectorySolution(
        q_t=z, q0=float(q0), theta=theta, action_excess=exc, det_delta=None,
        kind=Kind.COMPLEX,
    )
    lower = TrajectorySolution(
        q_t=z.conjugate(), q0=float(q0), theta=theta,
        action_excess=exc.conjugate(), det_delta=None, kind=Kind.COMPLEX,
    )
    return upper, lower


# ---------------------------------------------------------------------------
# periodic orbits


def _half_period_residual(x, theta, order):
    mc = 2.0 * (1.0 - x) * (1.0 + x) / (2.0 - x * x)
    kk = _backend.carlson_rf(0.0, mc, 1.0).real
    return 0.5 * theta * math.sqrt(1.0 - 0.5 * x * x) - 2 * order * kk


def periodic_amplitude(theta, order=1):
    """Amplitude of the periodic orbits that close ``order`` times in time
    ``Theta`` (``u = 2*order*K``); zero at ``Theta = 2*pi*order``."""
    _check_theta(theta)
    onset = 2.0 * math.pi * order
    if theta < onset:
        raise RegionError(f"no periodic orbit of order {order} below Theta={onset:.6g}")
    if _half_period_residual(0.0, theta, order) <= 0.0:
        return 0.0
    return brentq(_half_period_residual, 0.0, QT_EDGE, args=(theta, order),
                  xtol=ROOT_XTOL, rtol=4 * np.finfo(float).eps)


def _periodic_excess(amp, theta):
    if amp < 1e-3:
        return _backend.action_excess(complex(amp), theta).real
    q2 = amp * amp
    k = math.sqrt(q2 / (2.0 - q2))
    ell = (1.0 - q2) * legendre_K(k) - legendre_E(k)
    return (0.25 * theta * q2 * (q2 - 2.0)
            - 4.0 / 3.0 * math.sqrt(2.0 * (2.0 - q2)) * ell)


def periodic_saddle(q0, theta, g=1.0):
    """Lowest one-saddle for ``Theta >= 2 pi`` and ``|q0| <= A(Theta)``.

    All periodic orbits of period ``Theta`` have amplitude ``A(Theta)`` and
    the same action, so the representative is the one starting at its own
    turning point: turning points ``+-A``, returned with ``q_t = -sign(q0) A``.
    """
    amp = periodic_amplitude(theta)
    if abs(q0) > amp + 1e-12:
        raise RegionError(f"|q0|={abs(q0)} exceeds the periodic amplitude {amp}")
    q_t = -amp if q0 >= 0 else amp
    return TrajectorySolution(
        q_t=complex(q_t), q0=float(q0), theta=theta,
        action_excess=complex(_periodic_excess(amp, theta)), det_delta=None,
        kind=Kind.SADDLE, saddle_index=1, branch_index=-1,
    )

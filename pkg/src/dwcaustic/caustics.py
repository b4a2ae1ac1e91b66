"""Catastrophe curves in the ``(q0, Theta)`` plane and region classification.

Two families of curves bound the regions with different numbers of
classical solutions:

* fold curves, where two real turning points coalesce
  (``dq0/dq_t = 0``); the j-th one has its cusp at ``(0, (2j-1) pi)``;
* periodic curves ``|q0| = A_m(Theta)``, inside which periodic orbits of
  period ``Theta/m`` exist; cusp at ``(0, 2 m pi)``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ConvergenceError, DomainError, RegionError
from .trajectories import (
    derivative_zeros,
    find_real_turning_points,
    fold_points,
    periodic_amplitude,
)

__all__ = [
    "CurveKind",
    "CausticCurve",
    "Side",
    "Region",
    "ON_CAUSTIC_BAND",
    "caustic_lower",
    "amplitude_A",
    "fold_value",
    "classify_region",
    "locate_cusp",
    "trace_curves",
]

ON_CAUSTIC_BAND = 1e-9


class CurveKind(Enum):
    PAIR_CREATION = "PairCreation"
    PERIODIC_SPLIT = "PeriodicSplit"


@dataclass(frozen=True)
class CausticCurve:
    """One traced curve.

    ``points`` run from the ``q0 < 0`` arm through the cusp to the
    ``q0 > 0`` arm.  ``label`` is the label by cusp order
    (``PairCreation(1)``, ``PeriodicSplit(1)``, ``PairCreation(2)``, ...);
    ``created`` lists the solution labels that appear when the curve is
    crossed inwards, as found numerically by root counting.
    """

    kind: CurveKind
    branch: int
    cusp: tuple
    points: list = field(repr=False)
    created: tuple = ()

    @property
    def label(self) -> str:
        return f"{self.kind.value}({self.branch})"

    @property
    def order(self) -> int:
        """n of the cusp at ``Theta = n pi``."""
        if self.kind is CurveKind.PAIR_CREATION:
            return 2 * self.branch - 1
        return 2 * self.branch


class Side(Enum):
    OUTSIDE = "outside"          # one real solution, complex pair present
    INSIDE_FIRST = "inside_first"  # three or more, saddle from q0(q_t)
    INSIDE_SECOND = "inside_second"  # periodic one-saddle available
    ON_CAUSTIC = "on_caustic"


@dataclass(frozen=True)
class Region:
    n_solutions: int
    n_endpoint_roots: int
    side: Side

    @property
    def on_caustic(self) -> bool:
        return self.side is Side.ON_CAUSTIC


def caustic_lower(theta):
    """Endpoint ``q0~(Theta) >= 0`` of the first fold caustic."""
    if not theta > math.pi:
        raise RegionError(f"no caustic below Theta = pi (got {theta!r})")
    pts = fold_points(theta)
    return pts[0][1] if pts else 0.0


def amplitude_A(theta, order=1):
    """Amplitude of the periodic orbits of period ``Theta/order``."""
    return periodic_amplitude(theta, order)


def fold_value(theta, branch=1):
    """``q0~`` on the ``branch``-th fold curve, or ``None`` if not yet born."""
    pts = fold_points(theta)
    return pts[branch - 1][1] if len(pts) >= branch else None


def _periodic_values(theta):
    out = []
    m = 1
    while theta >= 2.0 * math.pi * m:
        out.append(periodic_amplitude(theta, m))
        m += 1
    return out


def classify_region(q0, theta):
    """Number of classical solutions at ``(q0, Theta)`` and the side of the
    first two curves the point lies on.

    ``n_endpoint_roots`` counts real roots of ``q0(q_t, Theta) = q0``;
    ``n_solutions`` adds the two time-reversed periodic orbits for each
    periodic curve enclosing the point.  Points within
    :data:`ON_CAUSTIC_BAND` of a curve are reported as on the caustic, with
    the count of the outer side.
    """
    if not abs(q0) < 1.0:
        raise DomainError(f"|q0| must be < 1, got {q0!r}")
    if not (math.isfinite(theta) and theta > 0):
        raise DomainError(f"Theta must be positive, got {theta!r}")
    a = abs(q0)
    folds = [p[1] for p in fold_points(theta)]
    amps = _periodic_values(theta)
    on = any(abs(a - v) < ON_CAUSTIC_BAND for v in folds + amps)
    roots = 1 + 2 * sum(1 for v in folds if a < v - ON_CAUSTIC_BAND)
    periodic = 2 * sum(1 for v in amps if a < v - ON_CAUSTIC_BAND)
    if on:
        side = Side.ON_CAUSTIC
    elif amps and a < amps[0]:
        side = Side.INSIDE_SECOND
    elif folds and a < folds[0]:
        side = Side.INSIDE_FIRST
    else:
        side = Side.OUTSIDE
    return Region(roots + periodic, roots, side)


def _fold_count(theta):
    return len(derivative_zeros(theta))


def locate_cusp(order, width=0.25, tol=1e-10):
    """Locate the cusp of the curve born at ``Theta ~ order*pi`` numerically.

    Odd orders: bisection on the onset of a new zero of ``dq0/dq_t``.
    Even orders: bisection on the onset of a nonzero periodic amplitude.
    """
    lo = order * math.pi - width
    hi = order * math.pi + width
    if order % 2:
        need = (order + 1) // 2

        def born(t):
            return _fold_count(t) >= need
    else:
        m = order // 2

        def born(t):
            return t >= 2.0 * math.pi * m and periodic_amplitude(t, m) > 0.0
    if born(lo) or not born(hi):
        raise ConvergenceError(f"no cusp of order {order} in [{lo}, {hi}]",
                               last_good=(lo, hi))
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if born(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _theta_grid(cusp, theta_max, step):
    # q0 ~ (Theta - cusp)^(3/2) near a fold cusp: cluster samples there
    near = cusp + np.geomspace(1e-6, step, 13)[:-1]
    far = np.arange(cusp + step, theta_max + 0.5 * step, step)
    return np.concatenate([near, far[far <= theta_max]])


def _created_labels(kind, branch, cusp, theta_max):
    """Labels gained when crossing the curve inwards just above its cusp."""
    theta = min(cusp + 0.3, max(theta_max, cusp + 1e-3))
    if kind is CurveKind.PERIODIC_SPLIT:
        return ("Saddle(1)", "Saddle(1)") if branch == 1 else ("Periodic", "Periodic")
    edge = fold_value(theta, branch)
    if edge is None:
        return ()
    inside, outside = 0.95 * edge, 1.05 * edge
    before = Counter(s.label for s in find_real_turning_points(outside, theta))
    after = Counter(s.label for s in find_real_turning_points(inside, theta))
    gained = after - before
    return tuple(sorted(gained.elements()))


def trace_curves(theta_max, step=1e-2, created=True):
    """Trace every curve whose cusp lies at or below ``theta_max``.

    Fold curves follow the zeros of ``dq0/dq_t`` (the j-th from the outside);
    periodic curves follow ``A_m(Theta)``.  Sampling is refined
    geometrically towards each cusp.
    """
    if not theta_max > math.pi:
        raise DomainError(f"theta_max must exceed pi, got {theta_max!r}")
    if not step > 0:
        raise DomainError(f"step must be positive, got {step!r}")
    curves = []
    order = 1
    while order * math.pi <= theta_max + 1e-3:
        cusp_theta = locate_cusp(order)
        if cusp_theta > theta_max:
            break
        if order % 2:
            kind, branch = CurveKind.PAIR_CREATION, (order + 1) // 2
        else:
            kind, branch = CurveKind.PERIODIC_SPLIT, order // 2
        arm = []
        last = 0.0
        for t in _theta_grid(cusp_theta, theta_max, step):
            if kind is CurveKind.PAIR_CREATION:
                v = fold_value(float(t), branch)
            else:
                v = periodic_amplitude(float(t), branch)
            if v is None or (arm and abs(v - last) > 0.2):
                raise ConvergenceError(
                    f"lost curve {kind.value}({branch}) at Theta={t}",
                    last_good=arm[-1] if arm else (0.0, cusp_theta),
                )
            arm.append((v, float(t)))
            last = v
        points = [(-q, t) for q, t in reversed(arm)] + [(0.0, cusp_theta)] + arm
        labels = _created_labels(kind, branch, cusp_theta, theta_max) if created else ()
        curves.append(CausticCurve(kind, branch, (0.0, cusp_theta), points, labels))
        order += 1
    return curves

"""Acceptance checks, shared by ``dwcaustic validate`` and the test suite.

Each check returns a :class:`CheckResult` with the measured quantities, the
tolerance it was held to, and its wall-clock time against a budget.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.special import ellipeinc, ellipkinc

from . import specfun as sf
from .caustics import amplitude_A, caustic_lower, locate_cusp
from .density import density_point, solve_xi, steepest_descent_sum
from .oracle import Grid, exact_rho_diag
from .trajectories import Kind, PhysParams, find_real_turning_points

__all__ = ["CheckResult", "CHECKS", "run_check", "run_checks"]


@dataclass
class CheckResult:
    id: str
    passed: bool
    tolerance: str
    measured: dict = field(default_factory=dict)
    seconds: float = 0.0
    budget: float = 0.0

    @property
    def within_budget(self) -> bool:
        return self.seconds <= self.budget

    def line(self) -> str:
        status = "PASS" if self.passed and self.within_budget else "FAIL"
        vals = ", ".join(f"{k}={_fmt(v)}" for k, v in self.measured.items())
        return (f"{status} {self.id}: {vals} [tol: {self.tolerance}; "
                f"{self.seconds:.2f}s of {self.budget:g}s]")

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "passed": bool(self.passed and self.within_budget),
            "tolerance": self.tolerance,
            "measured": {k: _plain(v) for k, v in self.measured.items()},
            "seconds": self.seconds,
            "budget": self.budget,
        }


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def _plain(v):
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def closed_form(**_):
    worst = 0.0
    for g in (0.1, 0.3):
        for theta in (0.5, 1.5, 2.5, 3.0):
            got = density_point(0.0, theta, g, improved=False).rho_usual
            want = (2 * math.pi * g * math.sin(theta)) ** -0.5 * math.exp(-theta / (4 * g))
            worst = max(worst, abs(got / want - 1.0))
    return worst < 1e-8, "relative 1e-8", {"max_rel_err": worst}


def caustic_cusp(**_):
    near = caustic_lower(math.pi + 1e-4)
    amp = amplitude_A(2 * math.pi)
    third = locate_cusp(3)
    ok = abs(near) < 1e-2 and amp < 1e-8 and abs(third - 3 * math.pi) < 1e-3
    return ok, "|q0~(pi+1e-4)|<1e-2, A(2pi)<1e-8, cusp 3pi+-1e-3", {
        "q0_near_cusp": near, "A_2pi": amp, "third_cusp_offset": third - 3 * math.pi}


def qstar_value(**_):
    q = caustic_lower(5.0)
    return abs(q - 0.3332) <= 5e-4, "0.3332 +- 5e-4", {"q_star": q}


def _local_min_weight(q0, theta, g):
    lm = next(s for s in find_real_turning_points(q0, theta, g) if s.kind is Kind.LOCAL_MIN)
    return math.exp(-lm.action.real / g) / math.sqrt(lm.det_delta)


def scaling(g=0.3, **_):
    q = np.logspace(-4, -2, 21)
    rho = [density_point(x, math.pi, g, improved=False).rho_usual for x in q]
    cusp_slope = np.polyfit(np.log(q), np.log(rho), 1)[0]
    qc = caustic_lower(5.0)
    eps = np.logspace(-9, -6, 16)
    w = [_local_min_weight(qc - e, 5.0, g) for e in eps]
    fold_slope = np.polyfit(np.log(eps), np.log(w), 1)[0]
    ok = abs(cusp_slope + 1 / 3) <= 0.02 and abs(fold_slope + 0.25) <= 0.03
    return ok, "slopes -1/3 +- 0.02 and -1/4 +- 0.03", {
        "cusp_slope": cusp_slope, "fold_slope": fold_slope}


def caustic_continuity(g=0.3, **_):
    gaps = []
    for theta in (3.3, 5.0):
        qc = caustic_lower(theta)
        mid = density_point(qc, theta, g).rho_improved
        lo = density_point(qc - 1e-5, theta, g).rho_improved
        hi = density_point(qc + 1e-5, theta, g).rho_improved
        gaps.append(abs(lo - hi) / mid)
    return max(gaps) < 1e-3, "relative jump < 1e-3 at eps=1e-5", {"jumps": gaps}


def classical_limit(**_):
    devs = []
    for g in (0.3, 0.1, 0.03):
        p = density_point(0.4, math.pi, g)
        devs.append(abs(p.rho_improved / p.rho_usual - 1.0))
    ok = devs[0] > devs[1] > devs[2] and devs[2] < 0.01
    return ok, "strictly decreasing, < 1% at g=0.03", {"deviation": devs}


def spread_10pct(**_):
    q = np.linspace(0.2, 0.5, 31)
    rel = []
    rel_imp = []
    for x in q:
        p = density_point(float(x), math.pi, 0.3)
        rel.append(abs(p.rho_improved / p.rho_usual - 1.0))
        rel_imp.append(abs(p.rho_usual / p.rho_improved - 1.0))
    ok = 0.05 <= min(rel) and max(rel) <= 0.15
    return ok, "|rho_imp/rho_us - 1| in [0.05, 0.15]", {
        "min": min(rel), "max": max(rel),
        "max_relative_to_improved": max(rel_imp), "min_relative_to_improved": min(rel_imp)}


def oracle_agreement(g=0.05, **_):
    q = np.linspace(-0.9, 0.9, 181)
    worst = {}
    for theta in (1.0, 2.0, 3.0):
        exact = exact_rho_diag(PhysParams(g, theta), Grid(), order=4)
        ref = exact.density_at(q)
        approx = np.array([density_point(float(x), theta, g, usual=False).rho_improved
                           for x in q])
        worst[theta] = float(np.max(np.abs(approx / ref - 1.0)))
    return max(worst.values()) < 0.05, "max relative deviation < 5%", {
        "g": g, "theta_1": worst[1.0], "theta_2": worst[2.0], "theta_3": worst[3.0]}


def xi_equation(**_):
    rng = np.random.default_rng(20240601)
    exact = solve_xi(1.0) == 1.0 and solve_xi(0.0) == 2.0
    worst = 0.0
    for r in rng.random(1000):
        xi = solve_xi(float(r))
        worst = max(worst, abs(xi ** 3 * (2 - xi) / (2 * xi - 1) - r))
    return exact and worst < 1e-12, "endpoints exact, residual < 1e-12", {
        "endpoints_exact": exact, "max_residual": worst}


def elliptic_substrate(**_):
    rng = np.random.default_rng(7)
    phis = rng.uniform(-1.5, 1.5, 1000)
    ks = rng.uniform(0.0, 0.95, 1000)
    us = rng.uniform(-10.0, 10.0, 1000)
    legendre = 0.0
    jacobi = 0.0
    for phi, k, u in zip(phis, ks, us):
        phi, k, u = float(phi), float(k), float(u)
        m = k * k
        f_quad = quad(lambda t: 1 / math.sqrt(1 - m * math.sin(t) ** 2), 0, phi,
                      epsabs=0, epsrel=1e-13)[0]
        e_quad = quad(lambda t: math.sqrt(1 - m * math.sin(t) ** 2), 0, phi,
                      epsabs=0, epsrel=1e-13)[0]
        f = sf.legendre_F(phi, k)
        e = sf.legendre_E_inc(phi, k)
        legendre = max(legendre, abs(f - f_quad), abs(f - ellipkinc(phi, m)),
                       abs(e - e_quad), abs(e - ellipeinc(phi, m)))
        sn, cn, dn = sf.jacobi_sncndn(u, k)
        big_k = sf.legendre_K(k)
        jacobi = max(jacobi, abs(sn * sn + cn * cn - 1), abs(dn * dn + m * sn * sn - 1),
                     abs(sf.jacobi_cd(u, k) - cn / dn),
                     abs(sf.jacobi_cd(u + 2 * big_k, k) + cn / dn))
    return max(legendre, jacobi) < 1e-10, "all < 1e-10", {
        "legendre": legendre, "jacobi": jacobi}


SD_POINTS = ((0.0, 4.5), (0.1, 5.0), (0.2, 5.0), (0.3, 5.5))


def steepest_descent(g=0.01, **_):
    diffs = []
    for q0, theta in SD_POINTS:
        sd = steepest_descent_sum(q0, theta, g)
        imp = density_point(q0, theta, g, usual=False).rho_improved
        diffs.append(abs(sd / imp - 1.0))
    return max(diffs) < 0.01, "relative 1%", {"max_rel_diff": max(diffs),
                                               "per_point": diffs}


# id -> (function, runtime budget in seconds)
CHECKS = {
    "closed-form": (closed_form, 1.0),
    "caustic-cusp": (caustic_cusp, 10.0),
    "qstar-value": (qstar_value, 1.0),
    "scaling": (scaling, 30.0),
    "caustic-continuity": (caustic_continuity, 30.0),
    "classical-limit": (classical_limit, 10.0),
    "spread-10pct": (spread_10pct, 10.0),
    "oracle-agreement": (oracle_agreement, 120.0),
    "xi-equation": (xi_equation, 1.0),
    "elliptic-substrate": (elliptic_substrate, 5.0),
    "steepest-descent": (steepest_descent, 5.0),
}


def run_check(check_id, **overrides):
    fn, budget = CHECKS[check_id]
    t0 = time.perf_counter()
    ok, tol, measured = fn(**overrides)
    return CheckResult(check_id, bool(ok), tol, measured,
                       time.perf_counter() - t0, budget)


def run_checks(only=None, **overrides):
    ids = list(CHECKS) if not only else list(only)
    unknown = [i for i in ids if i not in CHECKS]
    if unknown:
        raise KeyError(f"unknown check id(s): {', '.join(unknown)}")
    return [run_check(i, **overrides) for i in ids]

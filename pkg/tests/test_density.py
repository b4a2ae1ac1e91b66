import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from dwcaustic import density as dn
from dwcaustic.caustics import caustic_lower
from dwcaustic.density import (
    ComplexPair,
    ThreeExtrema,
    build_effpot_complex,
    build_effpot_three,
    density_point,
    fluctuation_factor,
    solve_xi,
)
from dwcaustic.errors import BranchError, DomainError, OrderingError

# bisection on xi^3 (2 - xi) / (2 xi - 1) = 1/2 (independent oracle)
XI_HALF = 1.771229878418706


def rho_usual(q0, theta, g):
    return dn.rho_usual(q0, theta, g).rho_usual


def rho_improved(q0, theta, g):
    return dn.rho_improved(q0, theta, g).rho_improved


def _rational(xi):
    return xi ** 3 * (2 - xi) / (2 * xi - 1)


def test_solve_xi_endpoints():
    assert solve_xi(1.0) == 1.0
    assert solve_xi(0.0) == 2.0


def test_solve_xi_example():
    assert solve_xi(0.5) == pytest.approx(XI_HALF, abs=1e-12)


def test_solve_xi_monotone():
    r = np.linspace(0, 1, 401)
    xs = [solve_xi(float(x)) for x in r]
    assert np.all(np.diff(xs) < 0)


def test_solve_xi_complement_near_coalescence():
    for c in (1e-12, 1e-9, 1e-6):
        xi = solve_xi(None, complement=c)
        # 1 - ratio ~ 2 (xi - 1)^3 near xi = 1
        assert (xi - 1) ** 3 * (xi + 1) / (2 * xi - 1) == pytest.approx(c, rel=1e-10)


def test_solve_xi_domain():
    with pytest.raises(DomainError):
        solve_xi(1.5)
    with pytest.raises(DomainError):
        solve_xi(-0.1)


@given(st.floats(0.0, 1.0))
def test_solve_xi_residual(r):
    xi = solve_xi(r)
    assert 1.0 <= xi <= 2.0
    assert abs(_rational(xi) - r) < 1e-12


def test_effpot_three_degenerate_minima():
    e = build_effpot_three(1.0, 1.0, 1.5, 0.3)
    assert e.xi == 2.0
    assert e.mu == pytest.approx(4 * 0.5 / 0.3, rel=1e-15)


def test_effpot_three_coalescence():
    e = build_effpot_three(1.0, 1.5, 1.5, 0.3)
    assert e.xi == 1.0
    assert e.mu == pytest.approx(12 * 0.5 / 0.3, rel=1e-15)


def test_effpot_three_reproduces_actions():
    g = 0.3
    e = build_effpot_three(1.0, 1.2, 1.3, g)
    assert _rational(e.xi) == pytest.approx(2 / 3, abs=1e-13)
    assert e(0.0) == 0.0
    assert g * e(1.0) == pytest.approx(0.3, abs=1e-13)
    assert g * e(e.xi) == pytest.approx(0.2, abs=1e-13)


def test_effpot_three_ordering():
    with pytest.raises(OrderingError):
        build_effpot_three(1.0, 1.4, 1.3, 0.3)
    with pytest.raises(OrderingError):
        build_effpot_three(1.0, 1.0, 1.0, 0.3)
    with pytest.raises(DomainError):
        build_effpot_three(1.0, 1.1, 1.3, 0.0)


def test_effpot_complex_quarter_pi():
    chi, g = 7.0, 0.3
    d = chi * (1 + 2j) / 12
    e = build_effpot_complex(0.0, g * d, g)
    assert e.phi == pytest.approx(math.pi / 4, abs=1e-13)
    assert e.chi == pytest.approx(chi, rel=1e-13)


def test_effpot_complex_residual_and_conjugate():
    g = 0.3
    for d in (0.2 + 0.05j, -0.4 + 0.3j, 0.01 + 1.0j):
        for val in (d, d.conjugate()):
            e = build_effpot_complex(0.5, 0.5 + g * val, g)
            h = 2 * cmath.exp(2j * e.phi) - cmath.exp(4j * e.phi)
            assert abs(e.chi * h / 12 - d) < 1e-10
            assert 0 <= e.phi <= math.pi / 2


def test_effpot_complex_extrema_are_stationary():
    e = ComplexPair(5.0, 0.7)
    z = cmath.exp(1j * e.phi)
    # V'(z)/chi = z - 2 cos(phi) z^2 + z^3 = z (z - e^{i phi})(z - e^{-i phi})
    c = 2 * math.cos(e.phi)
    assert abs(z - c * z * z + z ** 3) < 1e-14
    assert abs(e(z) - e.chi * (2 * cmath.exp(2j * e.phi) - cmath.exp(4j * e.phi)) / 12) < 1e-13


def test_effpot_complex_rejects_misidentified_pair():
    with pytest.raises(BranchError):
        build_effpot_complex(1.0, 1.0, 0.3)


def test_effpot_complex_matches_three_at_coalescence():
    # phi -> 0 with vanishing imaginary part: V1 -> V3 with xi = 1
    e = build_effpot_complex(1.0, 1.5 + 1e-14j, 0.3)
    three = build_effpot_three(1.0, 1.5, 1.5, 0.3)
    assert e.phi < 1e-4
    assert e.chi == pytest.approx(three.mu * three.xi, rel=1e-7)
    assert fluctuation_factor(e) == pytest.approx(fluctuation_factor(three), rel=1e-7)


def test_effpot_complex_imaginary_axis_pair():
    p = density_point(0.0, 2.0, 0.3)
    assert isinstance(p.effpot, ComplexPair)
    assert p.effpot.chi > 0
    upper = next(c for c in p.contributions if c.q_t.imag > 0)
    d = (upper.action - p.contributions[0].action) / 0.3
    h = 2 * cmath.exp(2j * p.effpot.phi) - cmath.exp(4j * p.effpot.phi)
    assert abs(p.effpot.chi * h / 12 - d) < 1e-10


def test_fluctuation_factor_gaussian_limit():
    assert fluctuation_factor(ComplexPair(1e6, math.pi / 2)) == pytest.approx(1.0, abs=1e-6)
    assert fluctuation_factor(ThreeExtrema(1.5, 1e6)) == pytest.approx(1.0, abs=1e-5)


def test_fluctuation_factor_degenerate_wells():
    vals = [fluctuation_factor(ThreeExtrema(2.0, mu)) for mu in (1e3, 1e4, 1e5)]
    errs = [abs(v - 2.0) for v in vals]
    assert errs[-1] < 1e-4
    # leading correction ~ 1/mu
    assert errs[0] / errs[1] == pytest.approx(10, rel=0.05)


def test_fluctuation_factor_at_coalescence_vs_trapezoid():
    e = ThreeExtrema(1.0, 10.0)
    z = np.linspace(-4.0, 5.0, 1_000_001)
    trap = np.trapezoid(np.exp(-e(z)), z) * math.sqrt(e.curvature / (2 * math.pi))
    assert fluctuation_factor(e) == pytest.approx(trap, rel=1e-8)


def test_fluctuation_factor_rejects_nonconfining():
    with pytest.raises(DomainError):
        fluctuation_factor(ThreeExtrema(1.5, -1.0))


def test_rho_usual_closed_form_example():
    want = (2 * math.pi * 0.3 * math.sin(2.0)) ** -0.5 * math.exp(-2.0 / 1.2)
    assert rho_usual(0.0, 2.0, 0.3) == pytest.approx(want, rel=1e-10)
    assert want == pytest.approx(0.1443, abs=5e-5)


def test_rho_usual_diverges_below_pi():
    d = np.geomspace(1e-4, 1e-2, 7)
    r = [rho_usual(0.0, math.pi - float(x), 0.3) for x in d]
    slope = np.polyfit(np.log(d), np.log(r), 1)[0]
    assert slope == pytest.approx(-0.5, abs=0.01)


def test_rho_usual_infinite_on_caustic():
    assert rho_usual(0.0, math.pi, 0.3) == math.inf
    assert density_point(caustic_lower(5.0), 5.0, 0.3).rho_usual == math.inf


def test_rho_improved_finite_on_caustics():
    for q0, theta in [(0.0, math.pi), (caustic_lower(5.0), 5.0), (caustic_lower(3.5), 3.5)]:
        r = rho_improved(q0, theta, 0.3)
        assert math.isfinite(r) and r > 0


def test_parity_exact():
    for q0, theta in [(0.2, 5.0), (0.5, 5.0), (0.37, 2.0), (0.1, 7.0), (0.05, 11.0)]:
        a = density_point(q0, theta, 0.3)
        b = density_point(-q0, theta, 0.3)
        assert a.rho_usual == b.rho_usual
        assert a.rho_improved == b.rho_improved


def test_continuity_across_fold_with_shrinking_gap():
    theta, g = 5.0, 0.3
    qc = caustic_lower(theta)
    mid = rho_improved(qc, theta, g)
    gaps = [abs(rho_improved(qc - e, theta, g) - rho_improved(qc + e, theta, g)) / mid
            for e in (1e-4, 1e-5, 1e-6)]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 1e-3


def test_continuity_across_periodic_curve():
    from dwcaustic.caustics import amplitude_A
    theta, g = 7.0, 0.3
    a = amplitude_A(theta)
    lo = rho_improved(a - 1e-7, theta, g)
    hi = rho_improved(a + 1e-7, theta, g)
    assert abs(lo - hi) / lo < 1e-4


def test_continuous_through_cusp():
    # the one-sided slopes differ at (0, pi); the jump across it closes linearly
    g = 0.3
    jumps = [abs(rho_improved(0.0, math.pi + d, g) - rho_improved(0.0, math.pi - d, g))
             for d in (1e-3, 1e-4, 1e-5)]
    assert jumps[0] / jumps[1] == pytest.approx(10, rel=0.1)
    assert jumps[2] < 1e-6
    for sign in (-1, 1):
        t = math.pi + sign * np.linspace(1e-3, 5e-3, 9)
        r = np.array([rho_improved(0.0, float(x), g) for x in t])
        assert np.abs(np.diff(r, 2)).max() < 1e-6 * r.max()


def test_classical_limit_monotone():
    for q0, theta in [(0.4, math.pi), (0.6, 5.0), (0.0, 2.0)]:
        devs = []
        for g in (0.3, 0.1, 0.03, 0.01):
            p = density_point(q0, theta, g)
            devs.append(abs(p.rho_improved / p.rho_usual - 1.0))
        assert devs == sorted(devs, reverse=True)


def test_steepest_descent_consistency():
    g = 0.01
    for q0, theta in [(0.2, 5.0), (0.3, 5.5)]:
        sd = dn.steepest_descent_sum(q0, theta, g)
        assert sd == pytest.approx(rho_improved(q0, theta, g), rel=0.01)


def test_normalisation_integrable_at_cusp():
    g, cut = 0.3, 1e-6
    val, err = quad(lambda q: rho_usual(q, math.pi, g), cut, 1.0 - 1e-9,
                    limit=200, points=[1e-4, 1e-2])
    assert math.isfinite(val) and err < 1e-6 * val
    # below the cut the density follows C q^(-1/3), whose integral is 1.5 C cut^(2/3)
    c = rho_usual(cut, math.pi, g) * cut ** (1 / 3)
    assert 1.5 * c * cut ** (2 / 3) < 1e-3 * val
    imp, _ = quad(lambda q: rho_improved(q, math.pi, g), 0.0, 1.0 - 1e-9, limit=200)
    assert math.isfinite(imp) and imp > 0


def test_contributions_list():
    p = density_point(0.2, 5.0, 0.3)
    assert p.n_solutions == 3
    labels = [c.label for c in p.contributions]
    assert labels[:3] == ["GlobalMin", "Saddle(1)", "LocalMin"]
    minima = [c for c in p.contributions if c.label in ("GlobalMin", "LocalMin")]
    assert p.rho_usual == pytest.approx(sum(c.weight for c in minima), rel=1e-15)


def test_periodic_saddle_used_inside_second_curve():
    p = density_point(0.1, 7.0, 0.3)
    assert any(c.label == "Saddle(1)" and c.q_t.real < 0 and abs(c.q_t.real) > 0.5
               for c in p.contributions)


def test_density_domain():
    with pytest.raises(DomainError):
        density_point(1.0, 2.0, 0.3)
    with pytest.raises(DomainError):
        density_point(0.1, 2.0, 0.0)


@settings(max_examples=40, deadline=None)
@given(q0=st.floats(-0.95, 0.95), theta=st.floats(0.3, 9.0))
def test_improved_positive_everywhere(q0, theta):
    r = rho_improved(q0, theta, 0.3)
    assert math.isfinite(r) and r > 0

import math

import numpy as np
import pytest

from dwcaustic import trajectories as tr
from dwcaustic.caustics import (
    CurveKind,
    Side,
    amplitude_A,
    caustic_lower,
    classify_region,
    fold_value,
    locate_cusp,
    trace_curves,
)
from dwcaustic.errors import DomainError, RegionError

CAUSTIC_LOWER_5 = 0.3331858032144688


def test_caustic_lower_example():
    assert caustic_lower(5.0) == pytest.approx(CAUSTIC_LOWER_5, rel=1e-12)
    assert abs(caustic_lower(5.0) - 0.3332) < 5e-4


def test_caustic_lower_by_brute_force_minimisation():
    # the caustic is the extremum of q0(q_t) on the outer monotone branch
    theta = 4.0
    qt = np.linspace(0.05, 0.999, 20001)
    q0 = np.array([tr.q0_of_qt(float(x), theta) for x in qt])
    i = int(np.argmin(np.abs(np.gradient(q0, qt))))
    assert abs(q0[i]) == pytest.approx(caustic_lower(theta), abs=1e-6)


def test_caustic_lower_vanishes_at_cusp():
    assert abs(caustic_lower(math.pi + 1e-4)) < 1e-2
    with pytest.raises(RegionError):
        caustic_lower(3.0)


def test_caustic_lower_monotone_increasing():
    thetas = np.linspace(math.pi + 1e-3, 4 * math.pi, 200)
    vals = [caustic_lower(float(t)) for t in thetas]
    assert np.all(np.diff(vals) > 0)
    assert vals[-1] < 1.0


def test_cusp_growth_exponent():
    d = np.geomspace(1e-4, 1e-2, 9)
    v = [caustic_lower(math.pi + float(x)) for x in d]
    slope = np.polyfit(np.log(d), np.log(v), 1)[0]
    assert slope == pytest.approx(1.5, abs=0.02)


def test_determinant_vanishes_along_caustic():
    for theta in np.linspace(3.3, 12.0, 25):
        theta = float(theta)
        for x in tr.derivative_zeros(theta):
            assert abs(tr._det_reduced(x, theta)) < 1e-6


def test_periodic_amplitude_cusp():
    assert amplitude_A(2 * math.pi) < 1e-8
    assert amplitude_A(2 * math.pi + 0.5) > 0
    assert amplitude_A(4 * math.pi, order=2) < 1e-8


def test_cusps_sit_at_multiples_of_pi():
    for order in (1, 2, 3, 4):
        assert abs(locate_cusp(order) - order * math.pi) < 1e-3


def test_fold_value_before_birth():
    assert fold_value(5.0, branch=2) is None
    assert fold_value(10.0, branch=2) > 0


def test_classify_examples():
    r = classify_region(0.0, 2.0)
    assert (r.n_solutions, r.side) == (1, Side.OUTSIDE)
    r = classify_region(0.2, 5.0)
    assert (r.n_solutions, r.side) == (3, Side.INSIDE_FIRST)
    r = classify_region(0.5, 5.0)
    assert (r.n_solutions, r.side) == (1, Side.OUTSIDE)
    r = classify_region(0.1, 7.0)
    assert r.side is Side.INSIDE_SECOND
    assert r.n_endpoint_roots == 3 and r.n_solutions == 5
    assert classify_region(CAUSTIC_LOWER_5, 5.0).on_caustic


def test_classify_is_even_in_q0():
    for q0, theta in [(0.2, 5.0), (0.45, 9.0), (0.05, 11.0)]:
        assert classify_region(q0, theta) == classify_region(-q0, theta)


def test_classify_domain():
    with pytest.raises(DomainError):
        classify_region(1.0, 2.0)
    with pytest.raises(DomainError):
        classify_region(0.1, 0.0)


@pytest.mark.slow
def test_classify_matches_root_count_on_grid():
    q0s = np.linspace(-0.95, 0.95, 300)
    for theta in np.linspace(0.1, 10.0, 300):
        theta = float(theta)
        for q0 in q0s:
            q0 = float(q0)
            region = classify_region(q0, theta)
            if region.on_caustic:
                continue
            assert len(tr.find_real_turning_points(q0, theta)) == region.n_endpoint_roots


def test_trace_below_second_cusp():
    curves = trace_curves(4.0)
    assert len(curves) == 1
    c = curves[0]
    assert c.label == "PairCreation(1)"
    assert c.cusp[1] == pytest.approx(math.pi, abs=1e-3)


def test_trace_to_ten():
    curves = trace_curves(10.0)
    assert [c.label for c in curves] == [
        "PairCreation(1)", "PeriodicSplit(1)", "PairCreation(2)"]
    assert [c.order for c in curves] == [1, 2, 3]
    for c in curves:
        assert abs(c.cusp[1] - c.order * math.pi) < 1e-3
        qs = [p[0] for p in c.points]
        assert qs == sorted(qs)
        assert qs == pytest.approx([-q for q in reversed(qs)])
    assert curves[0].created == ("LocalMin", "Saddle(1)")
    assert curves[1].kind is CurveKind.PERIODIC_SPLIT
    assert curves[2].created == ("Saddle(2)", "Saddle(3)")


def test_trace_rejects_bad_range():
    with pytest.raises(DomainError):
        trace_curves(3.0)

import importlib

import numpy as np
import pytest

from dwcaustic import _backend, _kernels_py

try:
    ck = importlib.import_module("dwcaustic._ckernels")
except ImportError:
    ck = None

needs_ext = pytest.mark.skipif(ck is None, reason="compiled kernels not built")

QTS = [0.0, 0.3, -0.7, 0.95, 0.4 + 0.2j, -0.6 + 0.3j, 0.9j, 1.5j]
THETAS = [0.5, 2.0, 5.0, 9.0]


def test_backend_name_matches_module():
    assert _backend.NAME in ("cython", "python")
    if _backend.NAME == "cython":
        assert _backend.kernels is ck


@needs_ext
@pytest.mark.parametrize("qt", QTS)
@pytest.mark.parametrize("theta", THETAS)
def test_kernels_agree(qt, theta):
    for name in ("q0_of_qt", "action_excess"):
        a = getattr(_kernels_py, name)(qt, theta)
        b = getattr(ck, name)(qt, theta)
        assert abs(a - b) <= 1e-14 * max(1.0, abs(a))
    a = _kernels_py.trajectory_start(qt, theta)
    b = ck.trajectory_start(qt, theta)
    assert np.allclose(a, b, rtol=1e-14, atol=1e-15)


@needs_ext
def test_carlson_and_jacobi_agree():
    for args in [(0.0, 0.75, 1.0), (1 + 1j, 2.0, 0.5j), (3.0, 0.1, 2.0)]:
        assert abs(_kernels_py.carlson_rf(*args) - ck.carlson_rf(*args)) < 1e-15
        assert abs(_kernels_py.carlson_rd(*args) - ck.carlson_rd(*args)) < 1e-14
    for u, m in [(0.7, 0.3), (2.0 + 1j, 0.5), (1.0, -0.4 + 0.2j)]:
        a = _kernels_py.sncndn(u, m, 1 - m)
        b = ck.sncndn(u, m, 1 - m)
        assert np.allclose(a, b, rtol=1e-14, atol=1e-15)

"""Complex-capable elliptic integrals and Jacobi elliptic functions.

Legendre integrals are built on Carlson's symmetric forms (duplication
theorem); Jacobi functions use the descending Landen transformation in
complex arithmetic, which continues analytically in both the argument and
the parameter.  Functions take the modulus ``k``; the parameter is
``m = k**2`` throughout the kernels.

Real inputs give ``float`` results; anything complex gives ``complex``.
"""

import cmath
import math
from numbers import Real

from . import _backend
from .errors import DomainError

__all__ = [
    "carlson_rf",
    "carlson_rd",
    "legendre_K",
    "legendre_E",
    "legendre_F",
    "legendre_E_inc",
    "ellipj",
    "jacobi_sncndn",
    "jacobi_sn",
    "jacobi_cn",
    "jacobi_dn",
    "jacobi_cd",
]


def _all_real(*args):
    return all(isinstance(a, Real) for a in args)


def _out(value, real):
    if real and value.imag == 0.0:
        return value.real
    return value


def _check_finite(*args):
    for a in args:
        if not cmath.isfinite(complex(a)):
            raise DomainError(f"non-finite argument {a!r}")


def carlson_rf(x, y, z):
    """Carlson's symmetric integral R_F(x, y, z).

    At most one argument may vanish.  Complex arguments follow the principal
    branch of the square root.
    """
    _check_finite(x, y, z)
    if sum(1 for a in (x, y, z) if a == 0) > 1:
        raise DomainError("carlson_rf: two or more arguments are zero")
    return _out(_backend.carlson_rf(x, y, z), _all_real(x, y, z))


def carlson_rd(x, y, z):
    """Carlson's symmetric integral R_D(x, y, z), symmetric in x and y."""
    _check_finite(x, y, z)
    if z == 0 or (x == 0 and y == 0):
        raise DomainError("carlson_rd: z or both x and y are zero")
    return _out(_backend.carlson_rd(x, y, z), _all_real(x, y, z))


def _param(k):
    m = complex(k) * complex(k)
    if m.imag == 0.0 and m.real >= 1.0:
        raise DomainError(f"modulus k={k!r} lies on the branch cut k^2 >= 1")
    return m


def legendre_K(k):
    """Complete elliptic integral of the first kind K(k)."""
    _check_finite(k)
    m = _param(k)
    return _out(_backend.carlson_rf(0.0, 1.0 - m, 1.0), _all_real(k))


def legendre_E(k):
    """Complete elliptic integral of the second kind E(k)."""
    _check_finite(k)
    if k == 1 or k == -1:
        return 1.0
    m = _param(k)
    y = 1.0 - m
    val = _backend.carlson_rf(0.0, y, 1.0) - m / 3.0 * _backend.carlson_rd(0.0, y, 1.0)
    return _out(val, _all_real(k))


def _reduce(phi):
    n = round(complex(phi).real / math.pi)
    return n, complex(phi) - n * math.pi


def legendre_F(phi, k):
    """Incomplete integral of the first kind F(phi, k).

    The real part of ``phi`` is reduced to [-pi/2, pi/2] using
    F(phi + n pi) = F(phi) + 2 n K.
    """
    _check_finite(phi, k)
    m = complex(k) * complex(k)
    n, psi = _reduce(phi)
    s = cmath.sin(psi)
    c = cmath.cos(psi)
    y = 1.0 - m * s * s
    if s == 0:
        val = 0.0j
    else:
        if abs(c) == 0 and abs(y) == 0:
            raise DomainError("legendre_F: logarithmic singularity at k=1")
        val = s * _backend.carlson_rf(c * c, y, 1.0)
    if n:
        val += 2 * n * _backend.carlson_rf(0.0, 1.0 - _param(k), 1.0)
    return _out(val, _all_real(phi, k))


def legendre_E_inc(phi, k):
    """Incomplete integral of the second kind E(phi, k)."""
    _check_finite(phi, k)
    m = complex(k) * complex(k)
    n, psi = _reduce(phi)
    s = cmath.sin(psi)
    c = cmath.cos(psi)
    y = 1.0 - m * s * s
    if s == 0:
        val = 0.0j
    elif abs(c) == 0 and abs(y) == 0:
        val = complex(s)
    else:
        c2 = c * c
        val = (s * _backend.carlson_rf(c2, y, 1.0)
               - m / 3.0 * s * s * s * _backend.carlson_rd(c2, y, 1.0))
    if n:
        val += 2 * n * complex(legendre_E(k))
    return _out(val, _all_real(phi, k))


def ellipj(u, m, mc=None):
    """Jacobi (sn, cn, dn) for parameter ``m``; ``mc`` defaults to 1 - m."""
    _check_finite(u, m)
    m = complex(m)
    if m.imag == 0.0 and m.real >= 1.0:
        raise DomainError(f"parameter m={m!r} lies on the branch cut m >= 1")
    if mc is None:
        mc = 1.0 - m
    return _backend.sncndn(u, m, mc)


def jacobi_sncndn(u, k):
    """Return the triple (sn, cn, dn)(u, k)."""
    real = _all_real(u, k)
    sn, cn, dn = ellipj(u, _param(k))
    return _out(sn, real), _out(cn, real), _out(dn, real)


def jacobi_sn(u, k):
    return jacobi_sncndn(u, k)[0]


def jacobi_cn(u, k):
    return jacobi_sncndn(u, k)[1]


def jacobi_dn(u, k):
    return jacobi_sncndn(u, k)[2]


def jacobi_cd(u, k):
    """cd = cn/dn; even in u with real period 4K(k)."""
    _, cn, dn = ellipj(u, _param(k))
    return _out(cn / dn, _all_real(u, k))

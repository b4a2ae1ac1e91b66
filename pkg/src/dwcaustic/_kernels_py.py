"""Pure-Python scalar kernels.

This module and the compiled ``_ckernels`` extension expose the same
functions with the same signatures; ``_backend`` picks one at import time.
Everything works on Python ``complex`` so that complex-step differentiation
and complex turning points share one code path.
"""

import cmath
import math

# 16-point Gauss-Legendre rule mapped to [0, 1]
GL_X = (
    0.005299532504175031, 0.0277124884633837, 0.06718439880608412,
    0.1222977958224985, 0.19106187779867811, 0.2709916111713863,
    0.35919822461037054, 0.4524937450811813, 0.5475062549188188,
    0.6408017753896295, 0.7290083888286136, 0.8089381222013219,
    0.8777022041775016, 0.9328156011936759, 0.9722875115366163,
    0.994700467495825,
)
GL_W = (
    0.013576229705877048, 0.031126761969323948, 0.04757925584124639,
    0.062314485627766936, 0.07479799440828838, 0.08457825969750127,
    0.09130170752246179, 0.0947253052275342, 0.0947253052275342,
    0.09130170752246179, 0.08457825969750127, 0.07479799440828838,
    0.062314485627766936, 0.04757925584124639, 0.031126761969323948,
    0.013576229705877048,
)

EPS = 2.220446049250313e-16
RF_Q = (3.0 * EPS) ** (-1.0 / 6.0)
RD_Q = (0.25 * EPS) ** (-1.0 / 6.0)
LANDEN_STOP = 1e-9
PANEL = 1.0


def carlson_rf(x, y, z):
    x0 = x = complex(x)
    y0 = y = complex(y)
    z0 = z = complex(z)
    a0 = a = (x + y + z) / 3.0
    q = RF_Q * max(abs(a0 - x), abs(a0 - y), abs(a0 - z))
    f = 1.0
    for _ in range(100):
        if q * f < abs(a):
            break
        sx = cmath.sqrt(x)
        sy = cmath.sqrt(y)
        sz = cmath.sqrt(z)
        lam = sx * sy + sx * sz + sy * sz
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        z = 0.25 * (z + lam)
        a = 0.25 * (a + lam)
        f *= 0.25
    X = f * (a0 - x0) / a
    Y = f * (a0 - y0) / a
    Z = -(X + Y)
    e2 = X * Y - Z * Z
    e3 = X * Y * Z
    return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0
            - 3.0 * e2 * e3 / 44.0) / cmath.sqrt(a)


def carlson_rd(x, y, z):
    x0 = x = complex(x)
    y0 = y = complex(y)
    z = complex(z)
    a0 = a = (x + y + 3.0 * z) / 5.0
    q = RD_Q * max(abs(a0 - x), abs(a0 - y), abs(a0 - z))
    f = 1.0
    s = 0.0
    for _ in range(100):
        if q * f < abs(a):
            break
        sx = cmath.sqrt(x)
        sy = cmath.sqrt(y)
        sz = cmath.sqrt(z)
        lam = sx * sy + sx * sz + sy * sz
        s += f / (sz * (z + lam))
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        z = 0.25 * (z + lam)
        a = 0.25 * (a + lam)
        f *= 0.25
    X = f * (a0 - x0) / a
    Y = f * (a0 - y0) / a
    Z = -(X + Y) / 3.0
    xy = X * Y
    z2 = Z * Z
    e2 = xy - 6.0 * z2
    e3 = (3.0 * xy - 8.0 * z2) * Z
    e4 = 3.0 * (xy - z2) * z2
    e5 = xy * z2 * Z
    series = (1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0
              - 3.0 * e4 / 22.0 - 9.0 * e2 * e3 / 52.0 + 3.0 * e5 / 26.0)
    return f * series / (a * cmath.sqrt(a)) + 3.0 * s


def sncndn(u, m, mc):
    """Jacobi sn, cn, dn by descending Landen transformation.

    ``mc`` must equal ``1 - m``; it is passed separately so callers near the
    separatrix can supply it without cancellation.
    """
    u = complex(u)
    m = complex(m)
    ks = []
    scale = 1.0
    kc = cmath.sqrt(complex(mc))
    for _ in range(60):
        if abs(m) < LANDEN_STOP:
            break
        k1 = m / ((1.0 + kc) * (1.0 + kc))
        ks.append(k1)
        scale *= 1.0 + k1
        m = k1 * k1
        kc = cmath.sqrt(1.0 - m)
    v = u / scale
    s = cmath.sin(v)
    c = cmath.cos(v)
    t = 0.25 * m * (v - s * c)
    sn = s - t * c
    cn = c + t * s
    dn = 1.0 - 0.5 * m * s * s
    for k1 in reversed(ks):
        s2 = k1 * sn * sn
        den = 1.0 + s2
        sn, cn, dn = (1.0 + k1) * sn / den, cn * dn / den, (1.0 - s2) / den
    return sn, cn, dn


def _modulus(qt):
    q2 = qt * qt
    den = 2.0 - q2
    m = q2 / den
    mc = 2.0 * (1.0 - qt) * (1.0 + qt) / den
    omega = cmath.sqrt(1.0 - 0.5 * q2)
    return q2, m, mc, omega


def q0_of_qt(qt, theta):
    qt = complex(qt)
    q2, m, mc, omega = _modulus(qt)
    sn, cn, dn = sncndn(0.5 * theta * omega, m, mc)
    return qt * cn / dn


def trajectory_start(qt, theta):
    """Return ``(q0, qdot0)``: endpoint and initial velocity of the
    symmetric trajectory whose turning point at ``theta/2`` is ``qt``."""
    qt = complex(qt)
    q2, m, mc, omega = _modulus(qt)
    sn, cn, dn = sncndn(0.5 * theta * omega, m, mc)
    return qt * cn / dn, qt * omega * mc * sn / (dn * dn)


def action_excess(qt, theta):
    """Dimensionless action minus ``theta/4`` for the symmetric trajectory
    with turning point ``qt``.

    The kinetic term is integrated along the real Euclidean-time segment,
    where the trajectory is ``qt*cd`` of a complex-linear argument, so no
    square-root branch has to be chosen.  The constant ``theta/4`` (action
    of the trajectory sitting on the barrier top) is removed analytically so
    that differences between nearby actions keep full precision.
    """
    qt = complex(qt)
    q2, m, mc, omega = _modulus(qt)
    u = 0.5 * theta * omega
    npan = max(1, int(math.ceil(abs(u) / PANEL)))
    h = u / npan
    acc = 0.0
    for p in range(npan):
        for i in range(16):
            sn, cn, dn = sncndn(h * (p + GL_X[i]), m, mc)
            d2 = dn * dn
            acc += GL_W[i] * sn * sn / (d2 * d2)
    kin = 2.0 * q2 * omega * mc * mc * h * acc
    return 0.25 * theta * q2 * (q2 - 2.0) + kin

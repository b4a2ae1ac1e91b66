# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled scalar kernels; mirrors ``_kernels_py`` function for function."""

from libc.math cimport ceil, fabs, pow

cdef extern from "complex.h" nogil:
    double complex csqrt(double complex)
    double complex csin(double complex)
    double complex ccos(double complex)
    double cabs(double complex)

cdef double[16] GL_X = [
    0.005299532504175031, 0.0277124884633837, 0.06718439880608412,
    0.1222977958224985, 0.19106187779867811, 0.2709916111713863,
    0.35919822461037054, 0.4524937450811813, 0.5475062549188188,
    0.6408017753896295, 0.7290083888286136, 0.8089381222013219,
    0.8777022041775016, 0.9328156011936759, 0.9722875115366163,
    0.994700467495825]
cdef double[16] GL_W = [
    0.013576229705877048, 0.031126761969323948, 0.04757925584124639,
    0.062314485627766936, 0.07479799440828838, 0.08457825969750127,
    0.09130170752246179, 0.0947253052275342, 0.0947253052275342,
    0.09130170752246179, 0.08457825969750127, 0.07479799440828838,
    0.062314485627766936, 0.04757925584124639, 0.031126761969323948,
    0.013576229705877048]

cdef double EPS = 2.220446049250313e-16
cdef double RF_Q = pow(3.0 * EPS, -1.0 / 6.0)
cdef double RD_Q = pow(0.25 * EPS, -1.0 / 6.0)
cdef double LANDEN_STOP = 1e-9
cdef double PANEL = 1.0


cdef inline double _max3(double a, double b, double c) nogil:
    if b > a:
        a = b
    if c > a:
        a = c
    return a


cdef double complex _rf(double complex x, double complex y,
                        double complex z) nogil:
    cdef double complex x0 = x, y0 = y
    cdef double complex a0 = (x + y + z) / 3.0
    cdef double complex a = a0, sx, sy, sz, lam, X, Y, Z, e2, e3
    cdef double q = RF_Q * _max3(cabs(a0 - x), cabs(a0 - y), cabs(a0 - z))
    cdef double f = 1.0
    cdef int it
    for it in range(100):
        if q * f < cabs(a):
            break
        sx = csqrt(x)
        sy = csqrt(y)
        sz = csqrt(z)
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
            - 3.0 * e2 * e3 / 44.0) / csqrt(a)


cdef double complex _rd(double complex x, double complex y,
                        double complex z) nogil:
    cdef double complex x0 = x, y0 = y
    cdef double complex a0 = (x + y + 3.0 * z) / 5.0
    cdef double complex a = a0, sx, sy, sz, lam, X, Y, Z
    cdef double complex xy, z2, e2, e3, e4, e5, series
    cdef double complex s = 0.0
    cdef double q = RD_Q * _max3(cabs(a0 - x), cabs(a0 - y), cabs(a0 - z))
    cdef double f = 1.0
    cdef int it
    for it in range(100):
        if q * f < cabs(a):
            break
        sx = csqrt(x)
        sy = csqrt(y)
        sz = csqrt(z)
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
    return f * series / (a * csqrt(a)) + 3.0 * s


cdef void _sncndn(double complex u, double complex m, double complex mc,
                  double complex *sn, double complex *cn,
                  double complex *dn) nogil:
    cdef double complex ks[60]
    cdef double complex kc = csqrt(mc), k1, v, s, c, t, s2, den, sn0
    cdef double complex scale = 1.0
    cdef int n = 0, i
    for i in range(60):
        if cabs(m) < LANDEN_STOP:
            break
        k1 = m / ((1.0 + kc) * (1.0 + kc))
        ks[n] = k1
        n += 1
        scale *= 1.0 + k1
        m = k1 * k1
        kc = csqrt(1.0 - m)
    v = u / scale
    s = csin(v)
    c = ccos(v)
    t = 0.25 * m * (v - s * c)
    sn[0] = s - t * c
    cn[0] = c + t * s
    dn[0] = 1.0 - 0.5 * m * s * s
    for i in range(n - 1, -1, -1):
        k1 = ks[i]
        sn0 = sn[0]
        s2 = k1 * sn0 * sn0
        den = 1.0 + s2
        sn[0] = (1.0 + k1) * sn0 / den
        cn[0] = cn[0] * dn[0] / den
        dn[0] = (1.0 - s2) / den


cdef inline void _modulus(double complex qt, double complex *q2,
                          double complex *m, double complex *mc,
                          double complex *omega) nogil:
    cdef double complex den
    q2[0] = qt * qt
    den = 2.0 - q2[0]
    m[0] = q2[0] / den
    mc[0] = 2.0 * (1.0 - qt) * (1.0 + qt) / den
    omega[0] = csqrt(1.0 - 0.5 * q2[0])


def carlson_rf(x, y, z):
    return complex(_rf(complex(x), complex(y), complex(z)))


def carlson_rd(x, y, z):
    return complex(_rd(complex(x), complex(y), complex(z)))


def sncndn(u, m, mc):
    cdef double complex sn, cn, dn
    _sncndn(complex(u), complex(m), complex(mc), &sn, &cn, &dn)
    return complex(sn), complex(cn), complex(dn)


def q0_of_qt(qt, double theta):
    cdef double complex q = complex(qt), q2, m, mc, omega, sn, cn, dn
    _modulus(q, &q2, &m, &mc, &omega)
    _sncndn(0.5 * theta * omega, m, mc, &sn, &cn, &dn)
    return complex(q * cn / dn)


def trajectory_start(qt, double theta):
    cdef double complex q = complex(qt), q2, m, mc, omega, sn, cn, dn
    _modulus(q, &q2, &m, &mc, &omega)
    _sncndn(0.5 * theta * omega, m, mc, &sn, &cn, &dn)
    return complex(q * cn / dn), complex(q * omega * mc * sn / (dn * dn))


def action_excess(qt, double theta):
    cdef double complex q = complex(qt), q2, m, mc, omega, u, h, sn, cn, dn
    cdef double complex acc = 0.0, d2, kin
    cdef int npan, p, i
    _modulus(q, &q2, &m, &mc, &omega)
    u = 0.5 * theta * omega
    npan = <int>ceil(cabs(u) / PANEL)
    if npan < 1:
        npan = 1
    h = u / npan
    for p in range(npan):
        for i in range(16):
            _sncndn(h * (p + GL_X[i]), m, mc, &sn, &cn, &dn)
            d2 = dn * dn
            acc += GL_W[i] * sn * sn / (d2 * d2)
    kin = 2.0 * q2 * omega * mc * mc * h * acc
    return complex(0.25 * theta * q2 * (q2 - 2.0) + kin)

# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled closed-form primitive: pair_integral over flat float64 arrays.

Same formulas as qdice._cf_numpy (stable sinc/sinhc product-to-sum forms,
exponential decomposition for mixed products); one fused scalar loop
instead of a chain of numpy temporaries.
"""
from libc.math cimport cos, cosh, exp, fabs, sin, sinh

import numpy as np

cimport numpy as cnp

cnp.import_array()

DEF SERIES_CUT = 1e-4

cdef inline double _sincu(double x) nogil:
    cdef double x2
    if fabs(x) < SERIES_CUT:
        x2 = x * x
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0
    return sin(x) / x

cdef inline double _sinhcu(double x) nogil:
    cdef double x2
    if fabs(x) < SERIES_CUT:
        x2 = x * x
        return 1.0 + x2 / 6.0 + x2 * x2 / 120.0
    return sinh(x) / x

cdef inline double _int_cos(double p, double q, double s) nogil:
    return s * cos(p + 0.5 * q * s) * _sincu(0.5 * q * s)

cdef inline double _int_sin(double p, double q, double s) nogil:
    return s * sin(p + 0.5 * q * s) * _sincu(0.5 * q * s)

cdef inline double _int_cosh(double p, double q, double s) nogil:
    return s * cosh(p + 0.5 * q * s) * _sinhcu(0.5 * q * s)

cdef inline double _int_sinh(double p, double q, double s) nogil:
    return s * sinh(p + 0.5 * q * s) * _sinhcu(0.5 * q * s)

cdef inline double _int_exp_sin(double a, double b, double k, double s) nogil:
    cdef double den = k * k + b * b
    cdef double hi = exp(k * s) * (k * sin(a + b * s) - b * cos(a + b * s))
    cdef double lo = k * sin(a) - b * cos(a)
    return (hi - lo) / den

cdef inline double _int_exp_cos(double a, double b, double k, double s) nogil:
    cdef double den = k * k + b * b
    cdef double hi = exp(k * s) * (k * cos(a + b * s) + b * sin(a + b * s))
    cdef double lo = k * cos(a) + b * sin(a)
    return (hi - lo) / den

# codes must match qdice._cf_numpy: SIN=0 COS=1 SINH=2 COSH=3

cdef double _pair(int f, int g, double a, double b, double c, double d, double s) nogil:
    cdef double pm, qm, pp, qp, sign
    cdef bint f_circ = f <= 1
    cdef bint g_circ = g <= 1
    if f_circ and g_circ:
        pm = a - c; qm = b - d
        pp = a + c; qp = b + d
        if f == 0 and g == 0:
            return 0.5 * (_int_cos(pm, qm, s) - _int_cos(pp, qp, s))
        if f == 0 and g == 1:
            return 0.5 * (_int_sin(pp, qp, s) + _int_sin(pm, qm, s))
        if f == 1 and g == 0:
            return 0.5 * (_int_sin(pp, qp, s) - _int_sin(pm, qm, s))
        return 0.5 * (_int_cos(pm, qm, s) + _int_cos(pp, qp, s))
    if (not f_circ) and (not g_circ):
        pm = a - c; qm = b - d
        pp = a + c; qp = b + d
        if f == 2 and g == 2:
            return 0.5 * (_int_cosh(pp, qp, s) - _int_cosh(pm, qm, s))
        if f == 2 and g == 3:
            return 0.5 * (_int_sinh(pp, qp, s) + _int_sinh(pm, qm, s))
        if f == 3 and g == 2:
            return 0.5 * (_int_sinh(pp, qp, s) - _int_sinh(pm, qm, s))
        return 0.5 * (_int_cosh(pp, qp, s) + _int_cosh(pm, qm, s))
    if f_circ:
        sign = 1.0 if g == 3 else -1.0
        if f == 0:
            return 0.5 * (exp(c) * _int_exp_sin(a, b, d, s)
                          + sign * exp(-c) * _int_exp_sin(a, b, -d, s))
        return 0.5 * (exp(c) * _int_exp_cos(a, b, d, s)
                      + sign * exp(-c) * _int_exp_cos(a, b, -d, s))
    sign = 1.0 if f == 3 else -1.0
    if g == 0:
        return 0.5 * (exp(a) * _int_exp_sin(c, d, b, s)
                      + sign * exp(-a) * _int_exp_sin(c, d, -b, s))
    return 0.5 * (exp(a) * _int_exp_cos(c, d, b, s)
                  + sign * exp(-a) * _int_exp_cos(c, d, -b, s))


def pair_integral_batch(
    int f,
    int g,
    double[::1] a,
    double[::1] b,
    double[::1] c,
    double[::1] d,
    double[::1] s,
):
    """Elementwise int_0^s F(a+bu) G(c+du) du.

    Each input has length n or 1 (broadcast without materializing copies).
    """
    cdef Py_ssize_t n = max(a.shape[0], b.shape[0], c.shape[0], d.shape[0], s.shape[0])
    cdef Py_ssize_t ia = 0 if a.shape[0] == 1 else 1
    cdef Py_ssize_t ib = 0 if b.shape[0] == 1 else 1
    cdef Py_ssize_t ic = 0 if c.shape[0] == 1 else 1
    cdef Py_ssize_t id_ = 0 if d.shape[0] == 1 else 1
    cdef Py_ssize_t is_ = 0 if s.shape[0] == 1 else 1
    for view, step in ((a, ia), (b, ib), (c, ic), (d, id_), (s, is_)):
        if step and view.shape[0] != n:
            raise ValueError("inputs must have length 1 or the common length")
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            out[i] = _pair(f, g, a[i * ia], b[i * ib], c[i * ic], d[i * id_], s[i * is_])
    return out

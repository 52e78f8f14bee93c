"""Closed-form elementary integrals, vectorized numpy implementation.

Everything the engine integrates is built from products of sin/cos/sinh/cosh
with arguments linear in the integration variable.  The single primitive

    pair_integral(F, G, a, b, c, d, s) = int_0^s F(a + b u) G(c + d u) du

covers all of it.  Same-family products go through product-to-sum identities
evaluated in the uniformly stable sinc/sinhc forms (exact through the
resonant point b = +-d, no branch switch); mixed products decompose the
hyperbolic factor into exponentials.

This module is the pure-Python backend; qdice._core provides the same
entry point compiled.
"""
import numpy as np

SIN, COS, SINH, COSH = 0, 1, 2, 3

_SERIES_CUT = 1e-4


def sincu(x):
    """sin(x)/x, series near 0 (unnormalized sinc)."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SERIES_CUT
    safe = np.where(small, 1.0, x)
    x2 = x * x
    return np.where(small, 1.0 - x2 / 6.0 + x2 * x2 / 120.0, np.sin(safe) / safe)


def sinhcu(x):
    """sinh(x)/x, series near 0."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SERIES_CUT
    safe = np.where(small, 1.0, x)
    x2 = x * x
    return np.where(small, 1.0 + x2 / 6.0 + x2 * x2 / 120.0, np.sinh(safe) / safe)


def _int_cos(p, q, s):
    # int_0^s cos(p + q u) du
    return s * np.cos(p + 0.5 * q * s) * sincu(0.5 * q * s)


def _int_sin(p, q, s):
    return s * np.sin(p + 0.5 * q * s) * sincu(0.5 * q * s)


def _int_cosh(p, q, s):
    return s * np.cosh(p + 0.5 * q * s) * sinhcu(0.5 * q * s)


def _int_sinh(p, q, s):
    return s * np.sinh(p + 0.5 * q * s) * sinhcu(0.5 * q * s)


def _int_exp_sin(a, b, k, s):
    # int_0^s e^{k u} sin(a + b u) du ; requires k^2 + b^2 > 0
    den = k * k + b * b
    hi = np.exp(k * s) * (k * np.sin(a + b * s) - b * np.cos(a + b * s))
    lo = k * np.sin(a) - b * np.cos(a)
    return (hi - lo) / den


def _int_exp_cos(a, b, k, s):
    den = k * k + b * b
    hi = np.exp(k * s) * (k * np.cos(a + b * s) + b * np.sin(a + b * s))
    lo = k * np.cos(a) + b * np.sin(a)
    return (hi - lo) / den


def pair_integral(f, g, a, b, c, d, s):
    """int_0^s F(a+bu) G(c+du) du with F, G coded SIN/COS/SINH/COSH.

    All of a, b, c, d, s broadcast; returns a float64 array of the broadcast
    shape.  b and d must not both vanish within one circular/exponential
    reduction (guaranteed here by omega, omega_b > 0).
    """
    a, b, c, d, s = np.broadcast_arrays(
        *(np.asarray(v, dtype=float) for v in (a, b, c, d, s))
    )
    f_circ = f in (SIN, COS)
    g_circ = g in (SIN, COS)
    if f_circ and g_circ:
        pm, qm = a - c, b - d
        pp, qp = a + c, b + d
        if f == SIN and g == SIN:
            return 0.5 * (_int_cos(pm, qm, s) - _int_cos(pp, qp, s))
        if f == SIN and g == COS:
            return 0.5 * (_int_sin(pp, qp, s) + _int_sin(pm, qm, s))
        if f == COS and g == SIN:
            return 0.5 * (_int_sin(pp, qp, s) - _int_sin(pm, qm, s))
        return 0.5 * (_int_cos(pm, qm, s) + _int_cos(pp, qp, s))
    if not f_circ and not g_circ:
        pm, qm = a - c, b - d
        pp, qp = a + c, b + d
        if f == SINH and g == SINH:
            return 0.5 * (_int_cosh(pp, qp, s) - _int_cosh(pm, qm, s))
        if f == SINH and g == COSH:
            return 0.5 * (_int_sinh(pp, qp, s) + _int_sinh(pm, qm, s))
        if f == COSH and g == SINH:
            return 0.5 * (_int_sinh(pp, qp, s) - _int_sinh(pm, qm, s))
        return 0.5 * (_int_cosh(pp, qp, s) + _int_cosh(pm, qm, s))
    if f_circ:
        # G hyperbolic: G(c+du) = (e^c e^{du} + sign e^{-c} e^{-du}) / 2
        sign = 1.0 if g == COSH else -1.0
        E = _int_exp_sin if f == SIN else _int_exp_cos
        return 0.5 * (np.exp(c) * E(a, b, d, s) + sign * np.exp(-c) * E(a, b, -d, s))
    sign = 1.0 if f == COSH else -1.0
    E = _int_exp_sin if g == SIN else _int_exp_cos
    return 0.5 * (np.exp(a) * E(c, d, b, s) + sign * np.exp(-a) * E(c, d, -b, s))

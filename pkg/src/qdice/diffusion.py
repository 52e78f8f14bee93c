"""Spectral density, noise kernel, diffusion coefficient D(t), factor Gamma(t).

The diffusion coefficient is the time derivative of the decoherence exponent
W(t) accumulated by the A subsystem, split into the two contributions of the
composite environment:

  thermal (hot bath, through B):
      W_T(t) = (gamma0 kb_t lam^2 / (hbar W^2)) * int_0^t G(s; t)^2 ds,
      G(s; t) the lam-reduced B difference response to the separation
      history dx, pinned at zero difference endpoints;
      thermal_part = dW_T/dt = pref * int_0^t G dG/dt ds  (closed form).

  quantum (B's initial packet of width sigma):
      W_K(t) = (lam^2 sigma / (32 hbar)) * [B1(t)^2 + B2(t)^2],
      B1 = int_0^t CB(W s) dx(s) ds,  B2 = int_0^t SB(W s) dx(s) ds;
      kernel_part = dW_K/dt.  For a harmonic B this is identically the
      double time integral of the stationary noise kernel
      nu(s1 - s2) = (lam^2 sigma / 32 hbar) cos(W (s1 - s2)).

Both exponents are non-negative, so Gamma = exp(-W) never exceeds 1; it is
not monotone (beat zeros of B1, B2 produce recoherence).

Everything is closed-form except two 1-D cumulative quadratures of fixed
smooth integrands, evaluated by panel Gauss-Legendre with a refinement
error estimate.  D at distinct times is independent; series are built
vectorized over the whole grid.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CausticError
from .model import (
    DeltaXMode,
    ModelConfig,
    OscillatorKind,
    TimeGrid,
    TrajectorySpec,
    validate_config,
)
from .quadrature import (
    QuadratureSettings,
    cumulative_gauss,
    integrate_gauss,
    trapezoid_cumulative,
)
from .trajectories import ResponseBasis, check_caustic, delta_x_weights

CLAMP = 700.0  # |exponent| bound before exponentiation


def spectral_density(omega_tilde, m: float, gamma0: float, cutoff: float):
    """Ohmic bath spectral weight 2 m gamma0 w~ exp(-w~^2 / cutoff^2)."""
    w = np.asarray(omega_tilde, dtype=float)
    if np.any(w < 0):
        raise ValueError("spectral density defined for omega_tilde >= 0")
    out = 2.0 * m * gamma0 * w * np.exp(-(w * w) / (cutoff * cutoff))
    return float(out) if np.isscalar(omega_tilde) else out


def noise_kernel(cfg: ModelConfig, delta_s):
    """Two-time kernel induced on A by B's initial packet.

    (lam^2 sigma / 32 hbar) * cosh(W ds) for an inverted B, cos(W ds) for a
    harmonic one; the prefactor is applied exactly once, here.  Even in ds.
    """
    pref = cfg.lam**2 * cfg.sigma / (32.0 * cfg.hbar)
    ds = np.asarray(delta_s, dtype=float)
    if cfg.case.b_kind is OscillatorKind.INVERTED:
        out = pref * np.cosh(cfg.omega_b * ds)
    else:
        out = pref * np.cos(cfg.omega_b * ds)
    return float(out) if np.isscalar(delta_s) else out


@dataclass(frozen=True)
class DiffusionSeries:
    grid: TimeGrid
    d_values: np.ndarray
    thermal_part: np.ndarray
    kernel_part: np.ndarray
    cumulative_thermal: np.ndarray
    cumulative_kernel: np.ndarray
    quad_error: float = 0.0


@dataclass(frozen=True)
class DecoherenceSeries:
    grid: TimeGrid
    gamma_values: np.ndarray
    cumulative_d: np.ndarray
    diffusion: DiffusionSeries = None
    clamped: bool = False


class _Engine:
    """Shared closed-form machinery for one (cfg, traj) pair."""

    def __init__(self, cfg: ModelConfig, traj: TrajectorySpec, quad: QuadratureSettings):
        self.cfg = validate_config(cfg)
        self.traj = traj
        self.quad = quad or QuadratureSettings()
        self.kind_a, self.kind_b = cfg.case.a_kind, cfg.case.b_kind
        self.om, self.ob = cfg.omega, cfg.omega_b
        self.basis = ResponseBasis(self.kind_a, self.om, self.kind_b, self.ob)
        self.pref_kernel = cfg.lam**2 * cfg.sigma / (32.0 * cfg.hbar)
        if cfg.double_prefactor:
            self.pref_kernel *= cfg.lam**2 * cfg.sigma / (32.0 * cfg.hbar)
        self.pref_thermal = 2.0 * cfg.gamma0 * cfg.kb_t * cfg.lam**2 / (cfg.hbar * self.ob**2)
        self.thermal_on = cfg.gamma0 * cfg.kb_t > 0.0

    # -- separation-history weights, vectorized over t ------------------------
    def weights(self, t):
        if self.traj.delta_x_mode is DeltaXMode.PINNED:
            check_caustic(self.kind_a, self.om, t, "pinned separation history")
        alpha, beta, beta_dot, kappa = delta_x_weights(self.kind_a, self.om, self.traj, t)
        return alpha, np.asarray(beta, dtype=float), np.asarray(beta_dot, dtype=float), kappa

    def delta_x_at(self, t, weights=None):
        alpha, beta, _, kappa = weights if weights is not None else self.weights(t)
        t = np.asarray(t, dtype=float)
        return alpha * self.basis.caf(self.om * t) + beta * self.basis.saf(self.om * t) + kappa

    @staticmethod
    def _mix(weights, triplet):
        alpha, beta, _, kappa = weights
        kc, ks, k1 = triplet
        return alpha * kc + beta * ks + kappa * k1

    # -- quantum-kernel exponent ----------------------------------------------
    def kernel_arrays(self, t):
        """(cum_kernel, kernel_part) at times t (array-friendly)."""
        t = np.asarray(t, dtype=float)
        w = self.weights(t)
        alpha, beta, beta_dot, kappa = w
        b1 = self._mix(w, self.basis.b_cb(t))
        b2 = self._mix(w, self.basis.b_sb(t))
        dx_t = self.delta_x_at(t, w)
        db1 = dx_t * self.basis.cbf(self.ob * t)
        db2 = dx_t * self.basis.sbf(self.ob * t)
        if np.any(beta_dot != 0.0):
            db1 = db1 + beta_dot * self.basis.b_cb(t)[1]
            db2 = db2 + beta_dot * self.basis.b_sb(t)[1]
        cum = self.pref_kernel * (b1 * b1 + b2 * b2)
        part = 2.0 * self.pref_kernel * (b1 * db1 + b2 * db2)
        return cum, part

    # -- thermal exponent ------------------------------------------------------
    def _thermal_caustic_guard(self, t):
        check_caustic(self.kind_b, self.ob, t[t > 0], "B difference response")

    def _cumulants(self, times):
        """Cumulative integrals of the fixed integrands used by V(t).

        Rows: [sB*Kc, sB*Ks, sB*K1, sB^2, Kc^2, Ks^2, K1^2, Kc*Ks, Kc*K1, Ks*K1]
        """
        basis = self.basis

        def rows(nodes):
            kc, ks, k1 = basis.k_sb(nodes)
            sb = basis.sbf(self.ob * nodes)
            return np.stack(
                [sb * kc, sb * ks, sb * k1, sb * sb, kc * kc, ks * ks,
                 k1 * k1, kc * ks, kc * k1, ks * k1]
            )

        return cumulative_gauss(rows, times, self.quad)

    def thermal_arrays(self, times):
        """(cum_thermal, thermal_part, quad_err) on the full grid."""
        t = np.asarray(times, dtype=float)
        if not self.thermal_on:
            z = np.zeros_like(t)
            return z, z.copy(), 0.0
        self._thermal_caustic_guard(t)
        C, err = self._cumulants(t)
        c_sbkc, c_sbks, c_sbk1, c_sb2, c_kc2, c_ks2, c_k12, c_kcks, c_kck1, c_ksk1 = C
        w = self.weights(t)
        alpha, beta, beta_dot, kappa = w
        jt = self._mix(w, self.basis.k_sb(t))
        b2 = self._mix(w, self.basis.b_sb(t))
        sbt = self.basis.sbf(self.ob * t)
        with np.errstate(invalid="ignore", divide="ignore"):
            r = np.where(t > 0, jt / np.where(sbt == 0.0, 1.0, sbt), 0.0)
        s1 = alpha * c_sbkc + beta * c_sbks + kappa * c_sbk1
        js2 = (
            alpha**2 * c_kc2 + beta**2 * c_ks2 + kappa**2 * c_k12
            + 2 * alpha * beta * c_kcks + 2 * alpha * kappa * c_kck1
            + 2 * beta * kappa * c_ksk1
        )
        v = js2 - 2.0 * r * s1 + r * r * c_sb2
        cum = 0.5 * self.pref_thermal * v

        with np.errstate(invalid="ignore", divide="ignore"):
            inv_sbt2 = np.where(t > 0, 1.0 / np.where(sbt == 0.0, 1.0, sbt) ** 2, 0.0)
        g_dg = -self.ob * b2 * inv_sbt2 * (s1 - r * c_sb2)
        if np.any(beta_dot != 0.0):
            ks_t = self.basis.k_sb(t)[1]
            js_ks = alpha * c_kcks + beta * c_ks2 + kappa * c_ksk1
            with np.errstate(invalid="ignore", divide="ignore"):
                kst_over = np.where(t > 0, ks_t / np.where(sbt == 0.0, 1.0, sbt), 0.0)
            g_dg = g_dg + beta_dot * (js_ks - kst_over * s1 - r * c_sbks + r * kst_over * c_sb2)
        part = self.pref_thermal * g_dg
        part = np.where(t > 0, part, 0.0)
        return cum, part, err


def diffusion_series(
    cfg: ModelConfig,
    traj: TrajectorySpec,
    grid: TimeGrid,
    quad: QuadratureSettings = None,
) -> DiffusionSeries:
    """D(t) and its two addends (with exact cumulative exponents) on a grid."""
    eng = _Engine(cfg, traj, quad)
    t = grid.times
    cum_k, part_k = eng.kernel_arrays(t)
    cum_t, part_t, err = eng.thermal_arrays(t)
    part_k = np.where(t > 0, part_k, 0.0)
    return DiffusionSeries(
        grid=grid,
        d_values=part_t + part_k,
        thermal_part=part_t,
        kernel_part=part_k,
        cumulative_thermal=cum_t,
        cumulative_kernel=cum_k,
        quad_error=err,
    )


def diffusion_coefficient(
    cfg: ModelConfig,
    traj: TrajectorySpec,
    t: float,
    quad: QuadratureSettings = None,
):
    """(total, thermal_part, kernel_part) at a single time.

    Identical formulas to the series builder; the two thermal moments are
    one-shot Gauss-Legendre integrals over [0, t].
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    if t == 0.0:
        return 0.0, 0.0, 0.0
    eng = _Engine(cfg, traj, quad)
    quad = eng.quad
    _, part_k = eng.kernel_arrays(np.asarray(t, dtype=float))
    part_k = float(part_k)
    if not eng.thermal_on:
        return part_k, 0.0, part_k
    eng._thermal_caustic_guard(np.asarray([t], dtype=float))
    basis, ob = eng.basis, eng.ob
    w = eng.weights(np.asarray(t, dtype=float))
    alpha, beta, beta_dot, kappa = (w[0], float(w[1]), float(w[2]), w[3])

    def js_of(nodes):
        kc, ks, k1 = basis.k_sb(nodes)
        return alpha * kc + beta * ks + kappa * k1

    sb = lambda x: basis.sbf(ob * np.asarray(x, dtype=float))
    s1, _ = integrate_gauss(lambda x: sb(x) * js_of(x), 0.0, float(t), quad)
    c_sb2 = float(basis.sb2_cumulative(np.asarray(t, dtype=float)))
    jt = float(js_of(np.asarray(t, dtype=float)))
    b2 = float(eng._mix(w, basis.b_sb(np.asarray(t, dtype=float))))
    sbt = float(sb(t))
    r = jt / sbt
    g_dg = -ob * b2 / sbt**2 * (s1 - r * c_sb2)
    if beta_dot != 0.0:
        ks_only = lambda x: basis.k_sb(x)[1]
        js_ks, _ = integrate_gauss(lambda x: js_of(x) * ks_only(x), 0.0, float(t), quad)
        c_sbks, _ = integrate_gauss(lambda x: sb(x) * ks_only(x), 0.0, float(t), quad)
        ks_t = float(ks_only(np.asarray(t, dtype=float)))
        g_dg += beta_dot * (js_ks - ks_t / sbt * s1 - r * c_sbks + r * ks_t / sbt * c_sb2)
    part_t = eng.pref_thermal * g_dg
    return part_t + part_k, part_t, part_k


def decoherence_factor(
    cfg: ModelConfig,
    traj: TrajectorySpec,
    grid: TimeGrid,
    quad: QuadratureSettings = None,
    d_override=None,
) -> DecoherenceSeries:
    """Gamma(t) = exp(-W(t)) on the grid.

    The exponent is evaluated pointwise from the closed cumulative forms
    (not by accumulating trapezoid slices of D, which would leak O(h^2)
    error into steep cells); d_override is a test seam injecting a plain
    D(t) callable, integrated by composite trapezoid.
    """
    t = grid.times
    if d_override is not None:
        d = np.asarray([d_override(tk) for tk in t], dtype=float)
        series = DiffusionSeries(
            grid=grid,
            d_values=d,
            thermal_part=np.zeros_like(d),
            kernel_part=d.copy(),
            cumulative_thermal=np.zeros_like(d),
            cumulative_kernel=trapezoid_cumulative(d, t),
        )
    else:
        series = diffusion_series(cfg, traj, grid, quad)
    cum = series.cumulative_thermal + series.cumulative_kernel
    clipped = np.clip(cum, -CLAMP, CLAMP)
    clamped = bool(np.any(clipped != cum))
    return DecoherenceSeries(
        grid=grid,
        gamma_values=np.exp(-clipped),
        cumulative_d=cum,
        diffusion=series,
        clamped=clamped,
    )

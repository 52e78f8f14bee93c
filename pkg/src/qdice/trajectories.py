"""Closed-form classical trajectories and difference histories.

The boundary-value solution of q'' -/+ W^2 q = f(s) on [0, t] with
q(0) = q0, q(t) = qf is

    q(s) = q0 u0(s) + qf uf(s) + (1/W) [ J(s) - uf(s) J(t) ]

with mode functions u0(s) = S(W(t-s))/S(Wt), uf(s) = S(Ws)/S(Wt) and the
retarded convolution J(s) = int_0^s f(u) S(W(s-u)) du, where S is sinh for
an inverted oscillator and sin for a harmonic one.  Everything here is a
pure function of value inputs; no ODE integration in the hot path.

Harmonic boundary-value solutions are genuinely singular at W t = n pi
(caustics); evaluations inside the guard band raise CausticError.
"""
from __future__ import annotations

import numpy as np

from ._backend import COS, COSH, SIN, SINH, pair_integral
from .errors import CausticError
from .model import DeltaXMode, ModelConfig, OscillatorKind, TrajectorySpec

CAUSTIC_RTOL = 1e-8

# kind -> (s_code, c_code, s_func, c_func, eps) with d/dx c(x) = eps * s(x)
_TABLE = {
    OscillatorKind.HARMONIC: (SIN, COS, np.sin, np.cos, -1.0),
    OscillatorKind.INVERTED: (SINH, COSH, np.sinh, np.cosh, +1.0),
}


def _maybe_scalar(x, *inputs):
    if all(np.isscalar(v) or getattr(v, "ndim", 1) == 0 for v in inputs):
        return float(np.asarray(x))
    return np.asarray(x)


def check_caustic(kind: OscillatorKind, freq: float, t, what: str = "mode functions"):
    """Reject harmonic boundary-value evaluations too close to freq*t = n*pi.

    ``t`` may be an array (every entry is checked); t = 0 itself is only
    legal as the degenerate first grid point handled by callers.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 0):
        raise ValueError(f"final time must be positive, got t={t!r}")
    if kind is OscillatorKind.HARMONIC:
        st, ct = np.sin(freq * t_arr), np.cos(freq * t_arr)
        bad = np.abs(st) < CAUSTIC_RTOL * np.maximum(1.0, np.abs(ct))
        if np.any(bad):
            worst = np.atleast_1d(t_arr)[np.atleast_1d(bad)][0]
            raise CausticError(
                f"{what} singular: freq*t = {freq * float(worst):.6f} is within "
                f"{CAUSTIC_RTOL:.0e} of a multiple of pi (t = {float(worst):.6g})"
            )


def mode_functions(kind: OscillatorKind, freq: float, t: float, s):
    """Boundary mode pair (u0(s), uf(s)) with u0(0)=uf(t)=1, u0(t)=uf(0)=0."""
    check_caustic(kind, freq, t)
    _, _, sf, _, _ = _TABLE[kind]
    den = sf(freq * t)
    s = np.asarray(s, dtype=float)
    return sf(freq * (t - s)) / den, sf(freq * s) / den


def free_trajectory(kind: OscillatorKind, freq: float, t: float, x0: float, xf: float, s):
    """Classical path of the free oscillator with x(0)=x0, x(t)=xf."""
    u0, uf = mode_functions(kind, freq, t, s)
    return _maybe_scalar(x0 * u0 + xf * uf, s)


def free_trajectory_derivative(kind: OscillatorKind, freq: float, t: float, x0: float, xf: float, s):
    """Analytic d/ds of free_trajectory."""
    check_caustic(kind, freq, t)
    _, _, sf, cf, _ = _TABLE[kind]
    den = sf(freq * t)
    s = np.asarray(s, dtype=float)
    out = freq * (-x0 * cf(freq * (t - s)) + xf * cf(freq * s)) / den
    return _maybe_scalar(out, s)


def source_convolution(
    kind_b: OscillatorKind,
    omega_b: float,
    kind_a: OscillatorKind,
    omega: float,
    t: float,
    dx0: float,
    dxf: float,
    s,
):
    """Convolutions of the pinned A difference path against B's kernel.

    Returns (conv_s, conv_t) with
        conv_x = int_0^x dx_cl(u) S_B(omega_b (x - u)) du,
    dx_cl the free boundary-value path of A with endpoints (dx0, dxf).
    Closed form for all four kind combinations; the resonant omega = omega_b
    limits are evaluated exactly (stable sinc forms), so no resonance error
    exists.
    """
    check_caustic(kind_a, omega, t, "A difference path")
    sa_code, _, saf, _, _ = _TABLE[kind_a]
    sb_code, _, _, _, _ = _TABLE[kind_b]
    den = saf(omega * t)
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < 0) or np.any(s_arr > t):
        raise ValueError("require 0 <= s <= t")

    def conv(x):
        i0 = pair_integral(sa_code, sb_code, omega * t, -omega, omega_b * x, -omega_b, x)
        i1 = pair_integral(sa_code, sb_code, 0.0, omega, omega_b * x, -omega_b, x)
        return (dx0 * i0 + dxf * i1) / den

    return _maybe_scalar(conv(s_arr), s), float(conv(np.asarray(t, dtype=float)))


# -- separation histories ----------------------------------------------------

def delta_x_weights(kind_a: OscillatorKind, omega: float, traj: TrajectorySpec, t: float):
    """Decompose dx(u; t) = alpha*cA(w u) + beta*sA(w u) + kappa.

    Returns (alpha, beta, beta_dot, kappa); beta carries all t-dependence
    (pinned mode only).
    """
    mode = traj.delta_x_mode
    if mode is DeltaXMode.BALLISTIC:
        return traj.dx0, 0.0, 0.0, 0.0
    if mode is DeltaXMode.CONSTANT:
        return 0.0, 0.0, 0.0, traj.dx0
    check_caustic(kind_a, omega, t, "pinned separation history")
    _, _, saf, caf, _ = _TABLE[kind_a]
    st, ct = saf(omega * t), caf(omega * t)
    beta = (traj.dxf - traj.dx0 * ct) / st
    beta_dot = omega * (traj.dx0 - traj.dxf * ct) / (st * st)
    return traj.dx0, beta, beta_dot, 0.0


def delta_x_history(kind_a: OscillatorKind, omega: float, traj: TrajectorySpec, t: float, s):
    """Separation dx(s) of the two A branches under traj.delta_x_mode."""
    alpha, beta, _, kappa = delta_x_weights(kind_a, omega, traj, t)
    _, _, saf, caf, _ = _TABLE[kind_a]
    s = np.asarray(s, dtype=float)
    return _maybe_scalar(alpha * caf(omega * s) + beta * saf(omega * s) + kappa, s)


class ResponseBasis:
    """Closed-form moments of the three separation basis functions.

    K*(x)  = int_0^x {cA(w u), sA(w u), 1} SB(W(x-u)) du   (retarded response)
    Kc*(x) = same against CB(W(x-u))                        (its d/ds / W)
    B*(x)  = int_0^x {cA, sA, 1} {CB, SB}(W u) du           (free-mode moments)
    """

    def __init__(self, kind_a: OscillatorKind, omega: float, kind_b: OscillatorKind, omega_b: float):
        self.kind_a, self.kind_b = kind_a, kind_b
        self.om, self.ob = float(omega), float(omega_b)
        self.sa, self.ca, self.saf, self.caf, self.eps_a = _TABLE[kind_a]
        self.sb, self.cb, self.sbf, self.cbf, self.eps_b = _TABLE[kind_b]

    # retarded convolutions against SB(W(x-u))
    def k_sb(self, x):
        x = np.asarray(x, dtype=float)
        ob = self.ob
        kc = pair_integral(self.ca, self.sb, 0.0, self.om, ob * x, -ob, x)
        ks = pair_integral(self.sa, self.sb, 0.0, self.om, ob * x, -ob, x)
        k1 = self.eps_b * (self.cbf(ob * x) - 1.0) / ob
        return kc, ks, k1

    # against CB(W(x-u))
    def k_cb(self, x):
        x = np.asarray(x, dtype=float)
        ob = self.ob
        kc = pair_integral(self.ca, self.cb, 0.0, self.om, ob * x, -ob, x)
        ks = pair_integral(self.sa, self.cb, 0.0, self.om, ob * x, -ob, x)
        k1 = self.sbf(ob * x) / ob
        return kc, ks, k1

    # free-mode moments against SB(W u), CB(W u)
    def b_sb(self, x):
        x = np.asarray(x, dtype=float)
        ob = self.ob
        bc = pair_integral(self.ca, self.sb, 0.0, self.om, 0.0, ob, x)
        bs = pair_integral(self.sa, self.sb, 0.0, self.om, 0.0, ob, x)
        b1 = self.eps_b * (self.cbf(ob * x) - 1.0) / ob
        return bc, bs, b1

    def b_cb(self, x):
        x = np.asarray(x, dtype=float)
        ob = self.ob
        bc = pair_integral(self.ca, self.cb, 0.0, self.om, 0.0, ob, x)
        bs = pair_integral(self.sa, self.cb, 0.0, self.om, 0.0, ob, x)
        b1 = self.sbf(ob * x) / ob
        return bc, bs, b1

    def sb2_cumulative(self, x):
        """int_0^x SB(W s)^2 ds, closed form."""
        x = np.asarray(x, dtype=float)
        ob = self.ob
        if self.kind_b is OscillatorKind.HARMONIC:
            return 0.5 * x - np.sin(2.0 * ob * x) / (4.0 * ob)
        return np.sinh(2.0 * ob * x) / (4.0 * ob) - 0.5 * x


def _combine(weights, triplet):
    alpha, beta, kappa = weights
    kc, ks, k1 = triplet
    return alpha * kc + beta * ks + kappa * k1


def delta_q_trajectory(cfg: ModelConfig, traj: TrajectorySpec, t: float, s):
    """(delta_q(s), d/ds delta_q(s)) of the B difference path on [0, t].

    Homogeneous part from the (dq0, dqf) mode functions plus the
    lam/(m_b*omega_b) source response to the A separation history.
    """
    kind_a, kind_b = cfg.case.a_kind, cfg.case.b_kind
    om, ob = cfg.omega, cfg.omega_b
    check_caustic(kind_b, ob, t, "B mode functions")
    basis = ResponseBasis(kind_a, om, kind_b, ob)
    alpha, beta, _, kappa = delta_x_weights(kind_a, om, traj, t)
    w = (alpha, beta, kappa)

    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < 0) or np.any(s_arr > t):
        raise ValueError("require 0 <= s <= t")
    sbf, cbf = basis.sbf, basis.cbf
    den = sbf(ob * t)

    js = _combine(w, basis.k_sb(s_arr))
    jt = float(_combine(w, basis.k_sb(np.asarray(t, dtype=float))))
    jc = _combine(w, basis.k_cb(s_arr))

    u0 = sbf(ob * (t - s_arr)) / den
    uf = sbf(ob * s_arr) / den
    du0 = -ob * cbf(ob * (t - s_arr)) / den
    duf = ob * cbf(ob * s_arr) / den

    src = cfg.lam / (cfg.m_b * ob)
    dq = traj.dq0 * u0 + traj.dqf * uf + src * (js - uf * jt)
    dq_ds = traj.dq0 * du0 + traj.dqf * duf + src * (ob * jc - duf * jt)
    return _maybe_scalar(dq, s), _maybe_scalar(dq_ds, s)


def delta_q_time_derivative(cfg: ModelConfig, traj: TrajectorySpec, t: float, s):
    """Final-time derivative d/dt delta_q(s; t) at fixed s.

    Uses the identity CB(Wt) J(t) - SB(Wt) int_0^t dx CB(W(t-u)) du
    = -int_0^t dx(u) SB(W u) du, which removes the cancellation-prone
    cot(Wt) combination.
    """
    kind_a, kind_b = cfg.case.a_kind, cfg.case.b_kind
    om, ob = cfg.omega, cfg.omega_b
    check_caustic(kind_b, ob, t, "B mode functions")
    basis = ResponseBasis(kind_a, om, kind_b, ob)
    alpha, beta, beta_dot, kappa = delta_x_weights(kind_a, om, traj, t)
    w = (alpha, beta, kappa)

    s_arr = np.asarray(s, dtype=float)
    sbf, cbf = basis.sbf, basis.cbf
    den = sbf(ob * t)
    t_arr = np.asarray(t, dtype=float)

    b2 = float(_combine(w, basis.b_sb(t_arr)))
    uf = sbf(ob * s_arr) / den
    dG = -ob * (sbf(ob * s_arr) / den**2) * b2
    if beta_dot != 0.0:
        ks_s = pair_integral(basis.sa, basis.sb, 0.0, om, ob * s_arr, -ob, s_arr)
        ks_t = float(pair_integral(basis.sa, basis.sb, 0.0, om, ob * t, -ob, t_arr))
        dG = dG + beta_dot * (ks_s - uf * ks_t)

    homog = ob * sbf(ob * s_arr) * (traj.dq0 - traj.dqf * cbf(ob * t)) / den**2
    src = cfg.lam / (cfg.m_b * ob)
    return _maybe_scalar(homog + src * dG, s)

"""Decoherence-time estimators.

Two routes, mirroring the physics of the A subsystem:

* unstable A (cases b, d): phase-space squeezing at rate Lambda against the
  diffusion-limited width sigma_c = sqrt(2 D_i / Lambda), giving
  t_D = t_onset + ln(sigma_p(0) / sigma_c) / Lambda.
* harmonic A (cases a, c): the high-temperature criterion
  L^2 * int_0^tD D(s) ds ~ 1.

Plus the empirical route: first crossing of Gamma(t) below a threshold.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .diffusion import DecoherenceSeries, decoherence_factor
from .errors import NotReachedError
from .model import ModelConfig, OscillatorKind, TimeGrid, TrajectorySpec

DEFAULT_EPSILON = 0.01
PLATEAU_FRACTION = 0.2  # final fraction of the active window for d_reference
ONSET_FRACTION = 0.05   # |D| level (relative to d_reference) defining onset


@dataclass(frozen=True)
class LyapunovSpec:
    lambda_lyap: float
    t_max_onset: float
    d_reference: float

    def __post_init__(self):
        if not (self.lambda_lyap > 0):
            raise ValueError(f"lambda_lyap must be > 0, got {self.lambda_lyap!r}")
        if self.d_reference < 0 or self.t_max_onset < 0:
            raise ValueError("d_reference and t_max_onset must be >= 0")


def lyapunov_rate(cfg: ModelConfig, convention: str = "omega") -> float:
    """Stretching rate of an inverted A oscillator.

    'omega' (default): the exponential rate of its sinh solutions.
    'two_omega_sq': the 2 w^2 variant (dimensionally odd; kept selectable).
    """
    if cfg.case.a_kind is not OscillatorKind.INVERTED:
        raise ValueError("Lyapunov rate defined for an inverted A oscillator")
    if convention == "omega":
        return cfg.omega
    if convention == "two_omega_sq":
        return 2.0 * cfg.omega**2
    raise ValueError(f"unknown Lyapunov convention {convention!r}")


def squeezing_width(sigma_p0: float, lambda_lyap: float, t: float) -> float:
    """Momentum width sigma_p(t) = sigma_p(0) exp(Lambda t)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    return sigma_p0 * math.exp(lambda_lyap * t)


def critical_width(d_reference: float, lambda_lyap: float) -> float:
    """Diffusion bound on squeezing: sigma_c = sqrt(2 D_i / Lambda)."""
    if d_reference < 0:
        raise ValueError("d_reference must be >= 0")
    if lambda_lyap <= 0:
        raise ValueError("lambda_lyap must be > 0")
    return math.sqrt(2.0 * d_reference / lambda_lyap)


def unstable_decoherence_time(
    sigma_p0: float, t_max_onset: float, sigma_c: float, lambda_lyap: float
) -> float:
    """t_D = t_onset + ln(sigma_p0 / sigma_c) / Lambda.

    May come out below t_onset when sigma_p0 < sigma_c; reported as-is.
    """
    if sigma_c <= 0:
        raise ValueError("sigma_c must be > 0 (zero diffusion gives no bound)")
    if sigma_p0 <= 0:
        raise ValueError("sigma_p0 must be > 0")
    return t_max_onset + math.log(sigma_p0 / sigma_c) / lambda_lyap


def threshold_crossing_time(series: DecoherenceSeries, epsilon: float):
    """First time Gamma(t) <= epsilon, linearly interpolated; None if never."""
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must lie in (0, 1)")
    t = series.grid.times
    g = series.gamma_values
    below = np.nonzero(g <= epsilon)[0]
    if len(below) == 0:
        return None
    k = int(below[0])
    if k == 0:
        return float(t[0])
    frac = (epsilon - g[k - 1]) / (g[k] - g[k - 1])
    return float(t[k - 1] + frac * (t[k] - t[k - 1]))


def active_window(series: DecoherenceSeries, epsilon: float = DEFAULT_EPSILON) -> int:
    """Index bound of the decoherence-active part of the grid.

    The window closes where Gamma first reaches epsilon^2 (deep
    suppression); past it D keeps growing for unstable compositions and
    would dominate any grid-tail statistic.
    """
    deep = np.nonzero(series.gamma_values <= epsilon * epsilon)[0]
    return int(deep[0]) + 1 if len(deep) else len(series.gamma_values)


def reference_diffusion(series: DecoherenceSeries, epsilon: float = DEFAULT_EPSILON):
    """(d_reference, t_onset) read off a computed series.

    d_reference: median of D over the final 20% of the active window;
    t_onset: first time |D| exceeds 5% of d_reference.
    """
    n = active_window(series, epsilon)
    t = series.grid.times[:n]
    d = series.diffusion.d_values[:n]
    tail = d[int((1.0 - PLATEAU_FRACTION) * n):]
    d_ref = float(np.median(tail))
    idx = np.nonzero(np.abs(d) > ONSET_FRACTION * abs(d_ref))[0]
    t_onset = float(t[idx[0]]) if len(idx) else 0.0
    return d_ref, t_onset


def unstable_time_from_series(
    cfg: ModelConfig,
    series: DecoherenceSeries,
    epsilon: float = DEFAULT_EPSILON,
    lambda_lyap: float = None,
):
    """Wire the squeezing-route estimate to a computed Gamma series."""
    lam = lambda_lyap if lambda_lyap is not None else lyapunov_rate(cfg)
    d_ref, t_onset = reference_diffusion(series, epsilon)
    if d_ref <= 0:
        raise NotReachedError(
            "no positive diffusion plateau inside the active window",
            attained=d_ref,
        )
    sigma_c = critical_width(d_ref, lam)
    return unstable_decoherence_time(cfg.sigma_p0, t_onset, sigma_c, lam)


def harmonic_decoherence_time(
    cfg: ModelConfig,
    traj: TrajectorySpec,
    L: float,
    grid: TimeGrid,
    quad=None,
    series: DecoherenceSeries = None,
):
    """Smallest root of L^2 * int_0^t D(s) ds = 1 on the grid.

    The cumulative exponent is piecewise-linearly interpolated between grid
    points (the trapezoid interpolant); the root of the bracketing segment
    is solved exactly — the value bisection would converge to.  Returns the
    first crossing when the cumulative is non-monotone (recoherence).
    """
    if L <= 0:
        raise ValueError("L must be > 0")
    if series is None:
        series = decoherence_factor(cfg, traj, grid, quad)
    t = series.grid.times
    target = 1.0 / (L * L)
    cum = series.cumulative_d
    hit = np.nonzero(cum >= target)[0]
    if len(hit) == 0:
        raise NotReachedError(
            f"L^2 * cumulative D reached only {float(np.max(cum)) * L * L:.3e} < 1 "
            f"within t_max = {grid.t_max}",
            attained=float(np.max(cum)) * L * L,
        )
    k = int(hit[0])
    if k == 0:
        return float(t[0])
    frac = (target - cum[k - 1]) / (cum[k] - cum[k - 1])
    return float(t[k - 1] + frac * (t[k] - t[k - 1]))

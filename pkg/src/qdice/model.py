"""Physical parameter set, case taxonomy and validation.

All types are frozen dataclasses: immutable value objects, safe to share
between threads.  Frequencies are stored positive; whether an oscillator is
bound or unstable is carried by :class:`OscillatorKind`, so the
harmonic/inverted switch is a function-table swap (sin/cos vs sinh/cosh)
rather than complex arithmetic.

Units: natural units with hbar = k_B = 1 by default, but ``hbar`` is an
explicit field so dimensional checks remain possible.  Temperature enters
only through the product gamma0 * kb_t.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError


class OscillatorKind(enum.Enum):
    HARMONIC = "harmonic"
    INVERTED = "inverted"


class DeltaXMode(enum.Enum):
    """Separation history of the two superposition branches.

    BALLISTIC: dx(s) = dx0 * cos(w s) (cosh for an unstable subsystem) --
    the branches start a distance dx0 apart with zero relative velocity.
    PINNED: boundary-value difference path with endpoints (dx0, dxf);
    singular at the harmonic caustics w*t = n*pi.
    CONSTANT: dx(s) = dx0 for all s.
    """

    BALLISTIC = "ballistic"
    PINNED = "pinned"
    CONSTANT = "constant"


@dataclass(frozen=True)
class CompositeCase:
    """One of the four (A, B) oscillator compositions."""

    a_kind: OscillatorKind
    b_kind: OscillatorKind
    label: str

    def __post_init__(self):
        expected = _CASE_TABLE.get(self.label)
        if expected is None or expected != (self.a_kind, self.b_kind):
            raise ConfigError(
                f"case label {self.label!r} does not match kinds "
                f"({self.a_kind.value}, {self.b_kind.value})"
            )


_CASE_TABLE = {
    "a": (OscillatorKind.HARMONIC, OscillatorKind.INVERTED),
    "b": (OscillatorKind.INVERTED, OscillatorKind.HARMONIC),
    "c": (OscillatorKind.HARMONIC, OscillatorKind.HARMONIC),
    "d": (OscillatorKind.INVERTED, OscillatorKind.INVERTED),
}

CASE_LABELS = tuple(_CASE_TABLE)


def case_from_label(label: str) -> CompositeCase:
    """Map a case label (a-d, case-insensitive) to its composition."""
    key = str(label).strip().lower()
    if key not in _CASE_TABLE:
        raise ConfigError(
            f"unknown case label {label!r}; allowed labels: {', '.join(CASE_LABELS)}"
        )
    a_kind, b_kind = _CASE_TABLE[key]
    return CompositeCase(a_kind=a_kind, b_kind=b_kind, label=key)


@dataclass(frozen=True)
class ModelConfig:
    """Full physical parameter set.

    m_a, m_b   : masses of subsystems A and B
    omega      : bare frequency of A (rad/time, stored positive)
    omega_b    : bare frequency of B (rad/time, stored positive)
    lam        : A-B bilinear coupling
    gamma0     : bath damping constant of the external environment
    kb_t       : bath temperature energy k_B T
    hbar       : reduced Planck constant
    sigma      : width of B's initial wave packet
    sigma_p0   : initial momentum width of A (enters the unstable t_D estimate)
    cutoff     : bath spectral cutoff; must exceed both subsystem frequencies
    case       : which of the four compositions to use
    double_prefactor : apply the lam^2 sigma/(32 hbar) kernel prefactor twice
                 (sensitivity study of the printed-prefactor ambiguity)
    """

    case: CompositeCase = field(default_factory=lambda: case_from_label("a"))
    m_a: float = 1.0
    m_b: float = 1.0
    omega: float = 1.0
    omega_b: float = 1.0 / 3.0
    lam: float = 0.1
    gamma0: float = 1.0
    kb_t: float = 0.0
    hbar: float = 1.0
    sigma: float = 1.0
    sigma_p0: float = 18.0
    cutoff: float = 100.0
    double_prefactor: bool = False

    def with_(self, **kw) -> "ModelConfig":
        return replace(self, **kw)


def validate_config(cfg: ModelConfig) -> ModelConfig:
    """Return cfg unchanged if every invariant holds.

    Every violated invariant is reported by field name in a single
    ConfigError.  Idempotent: validate(validate(cfg)) == validate(cfg).
    """
    problems = []
    for name in ("m_a", "m_b", "hbar", "sigma", "sigma_p0"):
        v = getattr(cfg, name)
        if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
            problems.append(f"{name} must be a positive finite number, got {v!r}")
    for name in ("omega", "omega_b"):
        v = getattr(cfg, name)
        if not (math.isfinite(v) and v > 0):
            problems.append(
                f"{name} must be > 0 (instability is carried by the oscillator "
                f"kind, not a sign), got {v!r}"
            )
    if not (math.isfinite(cfg.gamma0) and cfg.gamma0 >= 0):
        problems.append(f"gamma0 must be >= 0, got {cfg.gamma0!r}")
    if not (math.isfinite(cfg.kb_t) and cfg.kb_t >= 0):
        problems.append(f"kb_t must be >= 0, got {cfg.kb_t!r}")
    if not math.isfinite(cfg.lam):
        problems.append(f"lam must be finite, got {cfg.lam!r}")
    if not (math.isfinite(cfg.cutoff) and cfg.cutoff > max(cfg.omega, cfg.omega_b)):
        problems.append(
            f"cutoff must exceed max(omega, omega_b) = "
            f"{max(cfg.omega, cfg.omega_b)!r}, got {cfg.cutoff!r}"
        )
    if not isinstance(cfg.case, CompositeCase):
        problems.append(f"case must be a CompositeCase, got {cfg.case!r}")
    if problems:
        raise ConfigError("invalid ModelConfig: " + "; ".join(problems))
    return cfg


@dataclass(frozen=True)
class TrajectorySpec:
    """Endpoint data for the classical paths entering the diffusion integrals.

    (x0, xf, q0, qf) are the physical endpoints of Eq.-of-motion paths; they
    are carried for completeness but the diffusion coefficient depends only
    on the difference histories.  (dx0, dxf) parametrize the A separation
    history according to ``delta_x_mode``; (dq0, dqf) are the B difference
    endpoints, zero after tracing B with a diagonal initial state.
    """

    x0: float = 0.0
    xf: float = 0.0
    q0: float = 0.0
    qf: float = 0.0
    dx0: float = 2.0
    dxf: float = 2.0
    dq0: float = 0.0
    dqf: float = 0.0
    delta_x_mode: DeltaXMode = DeltaXMode.BALLISTIC

    def __post_init__(self):
        for name in ("x0", "xf", "q0", "qf", "dx0", "dxf", "dq0", "dqf"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ConfigError(f"TrajectorySpec.{name} must be finite, got {v!r}")


def default_trajectory(cfg: ModelConfig) -> TrajectorySpec:
    """Separation L = 2 sigma, ballistic history, zero B difference endpoints."""
    L = 2.0 * cfg.sigma
    return TrajectorySpec(dx0=L, dxf=L)


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid 0 = t_0 < ... < t_n = t_max."""

    t_max: float
    n_steps: int

    def __post_init__(self):
        if not (math.isfinite(self.t_max) and self.t_max > 0):
            raise ConfigError(f"TimeGrid.t_max must be > 0, got {self.t_max!r}")
        if not (isinstance(self.n_steps, int) and self.n_steps >= 2):
            raise ConfigError(f"TimeGrid.n_steps must be an int >= 2, got {self.n_steps!r}")

    @property
    def dt(self) -> float:
        return self.t_max / self.n_steps

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.n_steps + 1)

"""qdice: decoherence induced by a composite environment.

Subsystem A couples to subsystem B; B couples to a hot Ohmic bath.  Either
subsystem may be a harmonic or an inverted oscillator (four compositions).
The package computes the diffusion coefficient D(t) on A, the decoherence
factor Gamma(t) = exp(-int_0^t D), decoherence-time estimates by both the
phase-space-squeezing and the high-temperature criteria, and validates the
diffusion term against an independent master-equation integrator.
"""
from ._backend import backend_name
from .diffusion import (
    DecoherenceSeries,
    DiffusionSeries,
    decoherence_factor,
    diffusion_coefficient,
    diffusion_series,
    noise_kernel,
    spectral_density,
)
from .errors import (
    AccuracyError,
    CausticError,
    ConfigError,
    IntegratorError,
    NotReachedError,
    QdiceError,
    StepSizeError,
    VisibilityError,
)
from .model import (
    CompositeCase,
    DeltaXMode,
    ModelConfig,
    OscillatorKind,
    TimeGrid,
    TrajectorySpec,
    case_from_label,
    default_trajectory,
    validate_config,
)
from .oracle import (
    CoefficientSet,
    DensityMatrixGrid,
    PacketSpec,
    evolve_density_matrix,
    fringe_visibility,
)
from .quadrature import QuadratureSettings
from .timescales import (
    LyapunovSpec,
    critical_width,
    harmonic_decoherence_time,
    squeezing_width,
    threshold_crossing_time,
    unstable_decoherence_time,
)
from .trajectories import (
    delta_q_time_derivative,
    delta_q_trajectory,
    free_trajectory,
    free_trajectory_derivative,
    source_convolution,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "CausticError",
    "CoefficientSet",
    "CompositeCase",
    "ConfigError",
    "DecoherenceSeries",
    "DeltaXMode",
    "DensityMatrixGrid",
    "DiffusionSeries",
    "IntegratorError",
    "LyapunovSpec",
    "ModelConfig",
    "NotReachedError",
    "OscillatorKind",
    "PacketSpec",
    "QdiceError",
    "QuadratureSettings",
    "StepSizeError",
    "TimeGrid",
    "TrajectorySpec",
    "VisibilityError",
    "backend_name",
    "case_from_label",
    "critical_width",
    "decoherence_factor",
    "default_trajectory",
    "delta_q_time_derivative",
    "delta_q_trajectory",
    "diffusion_coefficient",
    "diffusion_series",
    "evolve_density_matrix",
    "free_trajectory",
    "free_trajectory_derivative",
    "fringe_visibility",
    "harmonic_decoherence_time",
    "noise_kernel",
    "source_convolution",
    "spectral_density",
    "squeezing_width",
    "threshold_crossing_time",
    "unstable_decoherence_time",
    "validate_config",
]

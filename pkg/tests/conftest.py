import numpy as np
import pytest

from qdice import ModelConfig, TimeGrid, case_from_label, default_trajectory

# Reference calibration: frequency ratio 3:1, weak coupling, L = 2 sigma.
REF_KW = dict(omega=1.0, omega_b=1.0 / 3.0, lam=0.1, sigma=1.0, sigma_p0=18.0)
# Per-temperature windows (gamma0*kbT -> t_max); the three rows decohere on
# very different scales.
REF_TMAX = {0.0: 24.0, 1.0: 8.0, 100.0: 6.0}


def ref_model(case_label: str, g0kt: float) -> ModelConfig:
    if g0kt == 0.0:
        gamma0, kb_t = 0.0, 0.0
    else:
        gamma0, kb_t = 1.0, float(g0kt)
    return ModelConfig(case=case_from_label(case_label), gamma0=gamma0, kb_t=kb_t, **REF_KW)


def ref_grid(g0kt: float, n_steps: int = 800) -> TimeGrid:
    return TimeGrid(t_max=REF_TMAX[g0kt], n_steps=n_steps)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


@pytest.fixture
def model_b1():
    return ref_model("b", 1.0)


@pytest.fixture
def traj_b1(model_b1):
    return default_trajectory(model_b1)

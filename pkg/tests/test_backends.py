"""Compiled core vs pure-numpy fallback: identical contracts, near-identical values."""
import os
import subprocess
import sys

import numpy as np
import pytest

import qdice
from qdice import _cf_numpy
from qdice._backend import pair_integral

try:
    from qdice import _core
except ImportError:
    _core = None

needs_core = pytest.mark.skipif(_core is None, reason="compiled core not built")


class TestPrimitiveAgreement:
    @needs_core
    def test_all_sixteen_combinations(self, rng):
        a, c = rng.uniform(-3, 3, (2, 2000))
        b, d = rng.uniform(-2, 2, (2, 2000))
        b = np.where(np.abs(b) < 1e-3, 1e-3, b)
        d = np.where(np.abs(d) < 1e-3, 1e-3, d)
        s = rng.uniform(0.0, 4.0, 2000)
        for f in range(4):
            for g in range(4):
                compiled = _core.pair_integral_batch(f, g, a, b, c, d, s)
                fallback = _cf_numpy.pair_integral(f, g, a, b, c, d, s)
                np.testing.assert_allclose(compiled, fallback, rtol=1e-12, atol=1e-13)

    @needs_core
    def test_resonant_point_agreement(self):
        # sinc-series branch around b == d
        a = np.zeros(3)
        b = np.full(3, 1.0)
        c = np.zeros(3)
        d = np.array([1.0, 1.0 + 1e-9, 1.0 - 1e-12])
        s = np.full(3, 2.0)
        compiled = _core.pair_integral_batch(0, 0, a, b, c, d, s)
        fallback = _cf_numpy.pair_integral(0, 0, a, b, c, d, s)
        np.testing.assert_allclose(compiled, fallback, rtol=1e-13)

    def test_active_backend_matches_fallback(self, rng):
        # whichever backend is active must honour the numpy reference
        args = (1, 2, 0.3, 1.1, -0.2, 0.7, np.linspace(0.0, 3.0, 50))
        np.testing.assert_allclose(
            pair_integral(*args), _cf_numpy.pair_integral(*args), rtol=1e-12
        )


_CHILD = """
import numpy as np, qdice
cfg = qdice.ModelConfig(case=qdice.case_from_label("d"), gamma0=1.0, kb_t=1.0,
                        omega=1.0, omega_b=1.0/3.0, lam=0.1)
traj = qdice.default_trajectory(cfg)
s = qdice.decoherence_factor(cfg, traj, qdice.TimeGrid(t_max=6.0, n_steps=400))
print(qdice.backend_name())
np.save(r"{out}", s.gamma_values)
"""


@needs_core
def test_end_to_end_series_identical_across_backends(tmp_path):
    outputs = {}
    for backend in ("compiled", "numpy"):
        out = tmp_path / f"{backend}.npy"
        env = dict(os.environ, QDICE_BACKEND=backend)
        res = subprocess.run(
            [sys.executable, "-c", _CHILD.format(out=out)],
            env=env, capture_output=True, text=True, check=True,
        )
        assert res.stdout.strip() == backend
        outputs[backend] = np.load(out)
    np.testing.assert_allclose(outputs["compiled"], outputs["numpy"], rtol=1e-12, atol=1e-15)


def test_backend_name_reported():
    assert qdice.backend_name() in ("compiled", "numpy")

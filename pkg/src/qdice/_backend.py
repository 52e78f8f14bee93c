"""Backend selection: compiled extension core when available, numpy otherwise.

Set QDICE_BACKEND=numpy to force the fallback, QDICE_BACKEND=compiled to
require the extension (ImportError if it was not built).
"""
import os

from . import _cf_numpy

SIN = _cf_numpy.SIN
COS = _cf_numpy.COS
SINH = _cf_numpy.SINH
COSH = _cf_numpy.COSH

_requested = os.environ.get("QDICE_BACKEND", "auto").lower()

if _requested not in ("auto", "numpy", "compiled"):
    raise ValueError(f"QDICE_BACKEND must be auto/numpy/compiled, got {_requested!r}")

_core = None
if _requested in ("auto", "compiled"):
    try:
        from . import _core  # noqa: F401  (built by setup.py when a toolchain exists)
    except ImportError:
        _core = None
        if _requested == "compiled":
            raise

if _core is not None:
    BACKEND = "compiled"

    def pair_integral(f, g, a, b, c, d, s):
        import numpy as np

        vs = [np.asarray(v, dtype=float) for v in (a, b, c, d, s)]
        shape = np.broadcast_shapes(*(v.shape for v in vs))
        flat = []
        for v in vs:
            if v.ndim == 0:
                flat.append(v.reshape(1))  # stride-0 broadcast inside the core
            elif v.shape == shape:
                flat.append(np.ascontiguousarray(v).ravel())
            else:
                flat.append(np.ascontiguousarray(np.broadcast_to(v, shape)).ravel())
        out = _core.pair_integral_batch(int(f), int(g), *flat)
        return out.reshape(shape)

else:
    BACKEND = "numpy"
    pair_integral = _cf_numpy.pair_integral


def backend_name():
    return BACKEND

"""Build script: compiles the optional Cython core when a toolchain is present.

The package is fully functional without the extension (a vectorized numpy
fallback is selected at import); building it just makes the hot kernels
faster.  `QDICE_NO_EXT=1 pip install .` skips the compilation attempt.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("QDICE_NO_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "qdice._core",
                    ["src/qdice/_core.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)

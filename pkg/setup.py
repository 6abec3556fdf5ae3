"""Build script for the optional compiled kernel core.

The package works without the extension (a pure NumPy/Python fallback is
selected at import time), so a failed compile only costs speed.
"""

import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "oodbench._kernels",
                ["src/oodbench/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                # Kernels must produce bit-identical doubles to the pure
                # Python fallback; forbid FMA contraction and the
                # sin/cos -> sincos fusion (glibc sincos rounds differently).
                extra_compile_args=[
                    "-O2",
                    "-ffp-contract=off",
                    "-fno-builtin-sincos",
                    "-fno-builtin-sin",
                    "-fno-builtin-cos",
                ],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)

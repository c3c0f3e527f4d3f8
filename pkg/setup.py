import os
import platform

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # build without the compiled core; the numpy fallback is used
    cythonize = None

ext_modules = []
_cflags = ["-O3"]
if not os.environ.get("CHOWSECANT_PORTABLE"):
    _cflags.append("-march=native")
    if platform.machine().lower() in ("x86_64", "amd64"):
        # gcc defaults to 256-bit vectors; the modular row update gains ~1.6x from 512
        _cflags.append("-mprefer-vector-width=512")
if cythonize is not None and not os.environ.get("CHOWSECANT_NO_EXT"):
    ext_modules = cythonize(
        [
            Extension(
                "chowsecant._ffcore",
                ["src/chowsecant/_ffcore.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=_cflags,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)

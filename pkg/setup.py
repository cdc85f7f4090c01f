"""Build script for the compiled coordinate-descent kernel.

The package works without the extension (a numpy fallback is selected at
import time); building it just makes the solver several times faster.
"""

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = []
if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "noterisk.lasso._cdkernel",
                ["src/noterisk/lasso/_cdkernel.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=extensions)

"""Build script for the optional compiled kernels.

The package works without the extension (a pure-numpy fallback is selected
at import time); building it makes the alias-sampling and gate-application
hot loops several times faster.  Skip the build with COLLIDE_SKIP_EXT=1.
"""

import os

from setuptools import Extension, setup

extensions = []
if not os.environ.get("COLLIDE_SKIP_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        extensions = cythonize(
            [
                Extension(
                    "collide._kernels",
                    ["src/collide/_kernels.pyx"],
                    # -ffp-contract=off keeps the compiled kernels bit-identical
                    # to the numpy fallback (no FMA contraction).
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )

setup(ext_modules=extensions)

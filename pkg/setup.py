"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a numpy fallback is selected at
import time), so any failure here only costs speed, not functionality.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "expcascade._kernels._ckernels",
                ["src/expcascade/_kernels/_ckernels.pyx"],
                include_dirs=[numpy.get_include()],
                # -ffp-contract=off keeps the compiled arithmetic bit-identical
                # to the numpy fallback (no FMA contraction).
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)

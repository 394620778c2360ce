"""Builds the compiled relaxation kernels.

Floating point contraction is disabled so the compiled kernels stay
bit-identical to the numpy fallback; if Cython or a C compiler is
missing the package still installs and falls back at import time.
"""

from setuptools import setup

try:
    import numpy
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext_modules = cythonize(
        [Extension(
            "pslab._kernels",
            ["src/pslab/_kernels.pyx"],
            include_dirs=[numpy.get_include()],
            extra_compile_args=["-O3", "-ffp-contract=off"],
        )],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)

"""Build script: compiles the optional fast-kernel extension.

The package is pure Python plus one optional Cython extension holding the
hot polynomial/skein accumulation loops.  If Cython or a C compiler is
unavailable the build falls back to the pure-Python kernels transparently
(backend selection happens at import time in skeintorus.kernels).
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "skeintorus._fastkernels",
                ["src/skeintorus/_fastkernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)

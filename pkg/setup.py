"""Build script.  The compiled elimination kernel is optional: when Cython or a
C compiler is unavailable the package installs anyway and falls back to the
pure-Python kernel at import time."""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "hhx._kernel_c",
                ["src/hhx/_kernel_c.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)

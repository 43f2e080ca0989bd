"""Build hook: compile the quadrature kernel when Cython and numpy are present.

The package works without the extension (a numpy kernel is used instead),
so a failed or skipped build is not an error.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("SELBERG_NO_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        extensions = [
            Extension(
                "selberg._kernel",
                ["src/selberg/_kernel.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ]
        ext_modules = cythonize(
            extensions,
            compiler_directives={"language_level": "3", "boundscheck": False,
                                 "wraparound": False, "cdivision": True},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)

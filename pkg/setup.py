"""Build the optional compiled shooting kernel.

The package works without it: ``plapeig._backend`` falls back to the
pure-Python mirror in ``_pykernels.py`` when the extension is missing.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("PLAPEIG_NO_EXT", "") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "plapeig._kernels",
                    ["src/plapeig/_kernels.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)

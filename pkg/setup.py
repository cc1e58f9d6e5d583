import os

from setuptools import setup

ext_modules = []
if not os.environ.get("WVCOUNT_PURE"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/wvcount/_kernel.pyx"],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
            },
        )
    except ImportError:
        # No Cython available: install the pure-Python fallback only.
        ext_modules = []

setup(ext_modules=ext_modules)

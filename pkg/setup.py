import os

from setuptools import setup

ext_modules = []
if not os.environ.get("GAIDS_SKIP_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("gaids._kernels", ["src/gaids/_kernels.pyx"])],
            language_level=3,
        )
    except ImportError:
        # No Cython: install with the pure-python kernels only.
        ext_modules = []

setup(ext_modules=ext_modules)

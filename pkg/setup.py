"""Build shim.

Compiles the optional integer-rank kernel when Cython is available; the
package falls back to the pure-Python implementation otherwise.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/hmskit/_speedups.pyx"],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)

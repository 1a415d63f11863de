"""Build script for the optional compiled grid kernels.

The extension is marked optional: if the C toolchain or Cython is missing
the install still succeeds and edgebot falls back to the pure-Python
kernels in edgebot._grid_py.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "edgebot._grid_cy",
                ["src/edgebot/_grid_cy.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)

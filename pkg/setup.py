"""Build script for the optional compiled kernel extension.

The package is fully functional without the extension (a numpy fallback is
selected at import time); the extension only accelerates the hot pointwise
kernels. Build failures are therefore non-fatal.
"""

from setuptools import Extension, setup

try:
    import numpy as np
    from Cython.Build import cythonize

    ext = Extension(
        "nscrit._accel",
        ["src/nscrit/_accel.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
    )
    ext.optional = True
    ext_modules = cythonize([ext], language_level=3)
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)

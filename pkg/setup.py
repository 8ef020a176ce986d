"""Build script for the optional compiled algebra kernel.

The package works without the extension (a numpy fallback is selected at
import time); the extension just makes the dense Cl(4,1) products faster.
"""
from setuptools import Extension, setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "cgascene.kernel._core",
                sources=["src/cgascene/kernel/_core.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # No Cython/numpy at build time: install pure-Python only.
    ext_modules = []

setup(ext_modules=ext_modules)

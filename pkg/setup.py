"""Build hook for the optional Cython kernels.

The package works without them: ``topocc.kernels`` falls back to the
pure-Python implementation when the extension is missing.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("TOPOCC_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("topocc._ckernels", ["src/topocc/_ckernels.pyx"],
                       extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3",
                                 "boundscheck": False,
                                 "wraparound": False},
        )

setup(ext_modules=ext_modules)

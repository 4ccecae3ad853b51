"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a pure-Python twin of every kernel
ships in seqbatch._kernels_py); set SEQBATCH_SKIP_EXT=1 to skip compilation.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("SEQBATCH_SKIP_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("seqbatch._kernels", ["src/seqbatch/_kernels.pyx"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)

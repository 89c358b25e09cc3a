import os

from setuptools import Extension, setup

# The compiled light-cone kernels are optional: without them the package
# falls back to the pure-numpy implementation at import time.
extensions = []
if not os.environ.get("NULLWAVE_NO_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize

        extensions = cythonize(
            [
                Extension(
                    "nullwave._lightcone_cy",
                    ["src/nullwave/_lightcone_cy.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        extensions = []

setup(ext_modules=extensions)

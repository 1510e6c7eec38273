"""Build the optional Cython kernels; the package works without them."""
from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "cfc_eeg._kernels._ckernels",
                ["src/cfc_eeg/_kernels/_ckernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)

from setuptools import Extension, setup

# The compiled kernels are optional: the package falls back to the
# numpy-based kernels in sparseasm._kernels_py when the extension is
# missing.
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "sparseasm._kernels",
                ["src/sparseasm/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize
except ImportError:
    # No Cython/numpy at build time: install pure-Python only, the kernel
    # package falls back automatically at import.
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "matrixmech._kernels._core",
                ["src/matrixmech/_kernels/_core.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)

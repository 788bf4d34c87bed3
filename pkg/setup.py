"""Build script for the optional compiled kernel.

Without Cython the package installs as pure Python and the evaluator uses the
reference implementation.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover - build without the kernel
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("mfl.kernel._ckernel", ["src/mfl/kernel/_ckernel.pyx"], extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)

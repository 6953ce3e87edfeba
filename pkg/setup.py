import os

from setuptools import Extension, setup

# The compiled kernel is optional: without Cython or a compiler the package
# falls back to the pure-Python search.
ext_modules = []
if os.environ.get("FPP_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext = Extension(
            "fppmorse._ckernel",
            ["src/fppmorse/_ckernel.pyx"],
            include_dirs=["src/fppmorse"],
            language="c++",
            extra_compile_args=["-O2", "-std=c++17", "-ffp-contract=off"],
        )
        ext_modules = cythonize([ext], language_level=3)

setup(ext_modules=ext_modules)

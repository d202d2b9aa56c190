import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("BLASCHKE_TONGUES_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:  # pure-Python install; the fallback kernels are used
        cythonize = None
    if cythonize is not None:
        ext = Extension(
            "blaschke_tongues._kernels",
            ["src/blaschke_tongues/_kernels.pyx"],
            # the fallback must reproduce these results bit for bit
            extra_compile_args=["-O2", "-ffp-contract=off", "-fno-fast-math"],
        )
        ext_modules = cythonize(
            [ext],
            compiler_directives={"language_level": "3", "boundscheck": False,
                                 "wraparound": False, "cdivision": True},
        )

setup(ext_modules=ext_modules)

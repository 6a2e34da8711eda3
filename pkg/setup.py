from __future__ import annotations

import os

from setuptools import Extension, setup


def build_ext_modules():
    """Compile the hot-loop kernels when Cython is available.

    The package falls back to the pure-Python kernels at import time, so a
    missing compiler or Cython only costs speed, never functionality.
    """
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        name="geoviz._kernels._native",
        sources=[os.path.join("src", "geoviz", "_kernels", "_native.pyx")],
        extra_compile_args=["-O3"],
        language="c",
    )
    return cythonize([ext], language_level=3)


if __name__ == "__main__":
    setup(ext_modules=build_ext_modules())

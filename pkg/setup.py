"""Build hook for the optional compiled kernels.

The package works without the extension (pure-Python kernels are selected at
import time); a failed extension build therefore only warns.
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler or Cython missing
            print(f"warning: building planar4._speedups failed ({exc}); "
                  "falling back to pure-Python kernels", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: {ext.name} failed to compile ({exc}); "
                  "falling back to pure-Python kernels", file=sys.stderr)


def extensions():
    import os

    if not os.path.exists("src/planar4/_speedups.pyx"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        ["src/planar4/_speedups.pyx"],
        language_level=3,
    )


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": OptionalBuildExt},
)

"""Build script: compiles the optional scan kernel.

The package works without the extension (a numpy fallback is selected at
import time), so any build failure here downgrades to a warning instead
of aborting the install. Set UNIFLAG_NO_EXTENSION=1 to skip the compile
step entirely.
"""

import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, broken toolchain, ...
            self._skip(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._skip(exc)

    @staticmethod
    def _skip(exc):
        print(f"WARNING: building the compiled kernel failed ({exc}); "
              "falling back to the pure-python implementation.", file=sys.stderr)


def extensions():
    if os.environ.get("UNIFLAG_NO_EXTENSION"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("WARNING: Cython not available; installing without the "
              "compiled kernel.", file=sys.stderr)
        return []
    compile_args = []
    if sys.platform != "win32":
        # keep float expressions un-fused so both backends agree bit for bit
        compile_args = ["-O3", "-ffp-contract=off"]
    ext = Extension(
        "uniflag._kernels",
        ["src/uniflag/_kernels.pyx"],
        extra_compile_args=compile_args,
    )
    return cythonize([ext], language_level="3")


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})

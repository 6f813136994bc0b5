import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the accelerated kernels if possible, fall back silently otherwise.

    The package is fully functional without the compiled extension (a pure
    Python twin of every kernel ships alongside it), so a missing compiler
    must not break installation.
    """

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing / broken toolchain
            print(f"warning: skipping compiled kernels ({exc})", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: could not build {ext.name} ({exc})", file=sys.stderr)


ext_modules = []
if os.environ.get("MOLEKIT_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("molekit._kernels", ["src/molekit/_kernels.pyx"])],
            language_level=3,
        )
    except ImportError:
        print("warning: Cython unavailable, installing pure Python kernels only",
              file=sys.stderr)

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})

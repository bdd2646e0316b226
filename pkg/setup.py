"""Build script: compiles the optional Cython kernel.

The package is pure Python plus one optional extension, freecactus._core.
If Cython or a C compiler is unavailable the build falls back to the pure
interpreter kernel (freecactus._core_py); everything still works, only slower.
Set FREECACTUS_NO_EXT=1 to skip the extension on purpose.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Treat extension build failures as a warning, not an error."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing entirely
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # compile/link error
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(f"warning: building the accelerator extension failed ({exc}); "
              f"installing with the pure-Python kernel")


def extensions():
    if os.environ.get("FREECACTUS_NO_EXT") == "1":
        return []
    if not os.path.exists("src/freecactus/_core.pyx"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("warning: Cython not found; installing with the pure-Python kernel")
        return []
    return cythonize(
        [Extension("freecactus._core", ["src/freecactus/_core.pyx"])],
        language_level=3,
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
